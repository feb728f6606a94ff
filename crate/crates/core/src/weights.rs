//! Piecewise-constant resource weights and the advection thresholds.
//!
//! A weight `m` is stored as breakpoints `0 = x_0 < x_1 < ... < x_k = L` and one
//! value per piece. On the physical domain `L = 1`; the change of variable in
//! [`crate::rearrange`] produces weights on `(0, c(1))`, which is why the
//! right endpoint is not fixed here.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack used when checking the mass constraint.
pub const MASS_SLACK: f64 = 1e-12;

/// Upper end of the advection bracket searched by [`alpha_star`].
pub const ALPHA_STAR_BRACKET: f64 = 64.0;

/// Largest number of candidates [`brute_force_expmass_max`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 24;

/// Problem constants: advection rate, resource ceiling and mass bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub alpha: f64,
    pub kappa: f64,
    pub m0: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, kappa: f64, m0: f64) -> Result<Self> {
        let p = Self { alpha, kappa, m0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidParams(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidParams(format!("kappa must be > 0, got {}", self.kappa)));
        }
        if !(self.m0 > 0.0 && self.m0 < 1.0) {
            return Err(Error::InvalidParams(format!("m0 must lie in (0,1), got {}", self.m0)));
        }
        Ok(())
    }

    /// Same constants with a different advection rate.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.kappa, self.m0)
    }

    /// Length of the `kappa` set of a bang-bang weight with `∫m = -m0`.
    pub fn delta_star(&self) -> f64 {
        (1.0 - self.m0) / (self.kappa + 1.0)
    }

    /// Left endpoint of the centered interval of length [`Self::delta_star`].
    pub fn xi_star(&self) -> f64 {
        (self.kappa + self.m0) / (2.0 * (1.0 + self.kappa))
    }
}

/// Robin coefficient at both endpoints. Neumann is `Robin(0.0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Robin(f64),
    Dirichlet,
}

impl Boundary {
    pub fn neumann() -> Self {
        Boundary::Robin(0.0)
    }

    pub fn robin(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!("Robin coefficient must be >= 0, got {beta}")));
        }
        if beta.is_infinite() {
            return Ok(Boundary::Dirichlet);
        }
        Ok(Boundary::Robin(beta))
    }

    /// Finite Robin coefficient, `None` for Dirichlet.
    pub fn beta(&self) -> Option<f64> {
        match *self {
            Boundary::Robin(b) => Some(b),
            Boundary::Dirichlet => None,
        }
    }

    /// Robin coefficient with Dirichlet mapped to `+inf`.
    pub fn beta_or_inf(&self) -> f64 {
        self.beta().unwrap_or(f64::INFINITY)
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, Boundary::Robin(b) if *b == 0.0)
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Robin(b) if *b == 0.0 => write!(f, "neumann"),
            Boundary::Robin(b) => write!(f, "robin({b})"),
            Boundary::Dirichlet => write!(f, "dirichlet"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawWeight> for PiecewiseWeight {
    type Error = Error;

    fn try_from(raw: RawWeight) -> Result<Self> {
        PiecewiseWeight::new(raw.breakpoints, raw.values)
    }
}

/// A piecewise-constant weight on `(0, L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeight")]
pub struct PiecewiseWeight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseWeight {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeight("at least one piece is required".into()));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidWeight(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidWeight(format!("first breakpoint must be 0, got {}", breakpoints[0])));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWeight("non-finite breakpoint or value".into()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidWeight(format!(
                "breakpoints must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { breakpoints, values })
    }

    /// Builds a weight from consecutive piece lengths, skipping empty pieces.
    pub fn from_pieces(pieces: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut breakpoints = vec![0.0];
        let mut values = Vec::new();
        let mut x = 0.0;
        for (len, v) in pieces {
            if len < 0.0 || !len.is_finite() {
                return Err(Error::InvalidWeight(format!("negative or non-finite piece length {len}")));
            }
            let next = x + len;
            if next <= x {
                continue;
            }
            x = next;
            breakpoints.push(x);
            values.push(v);
        }
        Self::new(breakpoints, values)
    }

    pub fn constant(value: f64) -> Self {
        Self { breakpoints: vec![0.0, 1.0], values: vec![value] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_pieces(&self) -> usize {
        self.values.len()
    }

    /// Right endpoint of the domain.
    pub fn length(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn is_unit_domain(&self) -> bool {
        self.length() == 1.0
    }

    /// `(left, right, value)` for every piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    /// `(length, value)` for every piece.
    pub fn lengths(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pieces().map(|(a, b, v)| (b - a, v))
    }

    /// Value at `x`, right-continuous at interior breakpoints.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let len = self.length();
        if !(0.0..=len).contains(&x) {
            return Err(Error::Domain { x, length: len });
        }
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        Ok(self.values[idx.saturating_sub(1).min(self.values.len() - 1)])
    }

    /// `∫ m`.
    pub fn mass(&self) -> f64 {
        self.lengths().map(|(l, v)| l * v).sum()
    }

    /// `∫ m e^{alpha m}`.
    pub fn exp_mass(&self, alpha: f64) -> f64 {
        self.lengths().map(|(l, v)| l * v * (alpha * v).exp()).sum()
    }

    /// `∫ m e^{alpha (m - max m)}`, same sign as [`Self::exp_mass`] without overflow.
    fn exp_mass_scaled(&self, alpha: f64) -> f64 {
        let top = self.max_value();
        self.lengths().map(|(l, v)| l * v * (alpha * (v - top)).exp()).sum()
    }

    /// Measure of the superlevel set `{m > level}`.
    pub fn superlevel_measure(&self, level: f64) -> f64 {
        self.lengths().filter(|&(_, v)| v > level).map(|(l, _)| l).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Merges equal neighbours so the representation is unique.
    pub fn canonical(&self) -> Self {
        let mut breakpoints = vec![0.0];
        let mut values: Vec<f64> = Vec::with_capacity(self.values.len());
        for (_, b, v) in self.pieces() {
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = b;
            } else {
                values.push(v);
                breakpoints.push(b);
            }
        }
        Self { breakpoints, values }
    }

    /// Same pieces in a different order; `order[i]` is the source piece placed `i`-th.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.values.len() {
            return Err(Error::InvalidArgument("permutation length mismatch".into()));
        }
        let pieces: Vec<(f64, f64)> = self.lengths().collect();
        Self::from_pieces(order.iter().map(|&i| pieces[i]))
    }

    /// True when the values are non-decreasing and then non-increasing.
    pub fn is_unimodal(&self) -> bool {
        let c = self.canonical();
        let v = &c.values;
        let peak = v
            .windows(2)
            .position(|w| w[1] < w[0])
            .map_or(v.len() - 1, |i| i);
        v[peak..].windows(2).all(|w| w[1] <= w[0])
    }

    /// True when every value is `-1` or `kappa`.
    pub fn is_bang_bang(&self, kappa: f64) -> bool {
        self.values.iter().all(|&v| v == -1.0 || v == kappa)
    }
}

/// Why a weight is outside the admissible class.
#[derive(Debug, Clone, PartialEq)]
pub enum Inadmissible {
    NotUnitDomain { length: f64 },
    OutOfBounds { piece: usize, value: f64 },
    MassExceeded { mass: f64, bound: f64 },
    NoPositivePart,
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissible::NotUnitDomain { length } => write!(f, "domain is (0,{length}), expected (0,1)"),
            Inadmissible::OutOfBounds { piece, value } => {
                write!(f, "piece {piece} has value {value} outside [-1, kappa]")
            }
            Inadmissible::MassExceeded { mass, bound } => write!(f, "mass {mass} exceeds {bound}"),
            Inadmissible::NoPositivePart => write!(f, "weight is never positive"),
        }
    }
}

/// Checks `-1 <= m <= kappa`, `∫m <= -m0` and `|{m > 0}| > 0`.
pub fn check_admissible(m: &PiecewiseWeight, params: &ModelParams) -> std::result::Result<(), Inadmissible> {
    if !m.is_unit_domain() {
        return Err(Inadmissible::NotUnitDomain { length: m.length() });
    }
    if let Some((piece, &value)) = m
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| v < -1.0 || v > params.kappa)
    {
        return Err(Inadmissible::OutOfBounds { piece, value });
    }
    let mass = m.mass();
    if mass > -params.m0 + MASS_SLACK {
        return Err(Inadmissible::MassExceeded { mass, bound: -params.m0 });
    }
    if m.superlevel_measure(0.0) <= 0.0 {
        return Err(Inadmissible::NoPositivePart);
    }
    Ok(())
}

pub fn is_admissible(m: &PiecewiseWeight, params: &ModelParams) -> bool {
    check_admissible(m, params).is_ok()
}

/// The two-parameter family `(kappa + 1) χ_(xi, xi + delta) - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BangBangInterval {
    pub xi: f64,
    pub delta: f64,
    pub params: ModelParams,
}

impl BangBangInterval {
    pub fn new(xi: f64, delta: f64, params: ModelParams) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0,1), got {delta}")));
        }
        // small tolerance so that xi = 1 - delta computed in floating point is accepted
        if !(xi >= 0.0 && xi <= 1.0 - delta + 1e-14) {
            return Err(Error::InvalidArgument(format!("xi must lie in [0, 1-delta], got {xi}")));
        }
        Ok(Self { xi: xi.min(1.0 - delta), delta, params })
    }

    /// Interval of length `delta_star` touching `x = 0`.
    pub fn boundary(params: ModelParams) -> Self {
        Self { xi: 0.0, delta: params.delta_star(), params }
    }

    /// Interval of length `delta_star` centered in `(0,1)`.
    pub fn centered(params: ModelParams) -> Self {
        let delta = params.delta_star();
        Self { xi: 0.5 * (1.0 - delta), delta, params }
    }

    pub fn weight(&self) -> PiecewiseWeight {
        let k = self.params.kappa;
        let right = self.xi + self.delta;
        PiecewiseWeight::from_pieces([(self.xi, -1.0), (self.delta, k), (1.0 - right, -1.0)])
            .expect("interval weight is well formed")
    }

    /// Mirror image `(1 - xi - delta, 1 - xi)`.
    pub fn mirrored(&self) -> Self {
        Self { xi: (1.0 - self.xi - self.delta).max(0.0), ..*self }
    }
}

/// Closed-form uniform advection threshold `ᾱ(kappa, m0)`.
pub fn abar(params: &ModelParams) -> f64 {
    let k = params.kappa;
    let m0 = params.m0;
    ((k + m0) / (k * (1.0 - m0))).ln() / (1.0 + k)
}

/// Unique root of `alpha ↦ ∫ m e^{alpha m}`.
///
/// Returns `0` when the map is already non-negative at `alpha = 0` and
/// `+inf` when `m <= 0` everywhere or no root exists below
/// [`ALPHA_STAR_BRACKET`].
pub fn alpha_star(m: &PiecewiseWeight) -> f64 {
    if m.superlevel_measure(0.0) <= 0.0 {
        return f64::INFINITY;
    }
    if m.exp_mass(0.0) >= 0.0 {
        return 0.0;
    }
    let g = |a: f64| m.exp_mass_scaled(a);
    if g(ALPHA_STAR_BRACKET) < 0.0 {
        return f64::INFINITY;
    }
    // Newton on the scaled map, safeguarded by the bracket. Scaling by
    // e^{-a max m} leaves the Newton step unchanged.
    let (mut lo, mut hi) = (0.0, ALPHA_STAR_BRACKET);
    let top = m.max_value();
    let mut a = 1.0f64.min(0.5 * hi);
    for _ in 0..200 {
        let val = g(a);
        if val == 0.0 {
            return a;
        }
        if val < 0.0 {
            lo = a;
        } else {
            hi = a;
        }
        let deriv: f64 = m.lengths().map(|(l, v)| l * v * v * (a * (v - top)).exp()).sum();
        let step = val / deriv;
        let newton = a - step;
        let next = if deriv > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - a).abs() <= 4.0 * f64::EPSILON * a.max(1e-300) || hi - lo <= 4.0 * f64::EPSILON * hi {
            return next;
        }
        a = next;
    }
    a
}

/// Exhaustive maximizer of `∫ m e^{alpha m}` over weights constant on `cells`
/// uniform cells with values in `levels`, subject to `∫m <= -m0` and a
/// positive part.
pub fn brute_force_expmass_max(params: &ModelParams, cells: usize, levels: &[f64]) -> Result<(PiecewiseWeight, f64)> {
    if cells == 0 || levels.is_empty() {
        return Err(Error::InvalidArgument("need at least one cell and one level".into()));
    }
    if let Some(l) = levels.iter().find(|&&l| l < -1.0 || l > params.kappa) {
        return Err(Error::InvalidArgument(format!("level {l} outside [-1, kappa]")));
    }
    let size = (levels.len() as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if cells > 12 || levels.len() > 4 || size > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpace { size, limit: BRUTE_FORCE_LIMIT });
    }
    let h = 1.0 / cells as f64;
    let contrib: Vec<f64> = levels.iter().map(|&v| v * (params.alpha * v).exp()).collect();
    let mut digits = vec![0usize; cells];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let mass: f64 = digits.iter().map(|&d| levels[d]).sum::<f64>() * h;
        let positive = digits.iter().any(|&d| levels[d] > 0.0);
        if positive && mass <= -params.m0 + MASS_SLACK {
            let value = digits.iter().map(|&d| contrib[d]).sum::<f64>() * h;
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((digits.clone(), value));
            }
        }
        // mixed-radix increment
        let mut i = 0;
        loop {
            if i == cells {
                let (digits, value) = best.ok_or_else(|| {
                    Error::InvalidArgument("no admissible combination of levels".into())
                })?;
                let w = PiecewiseWeight::from_pieces(digits.iter().map(|&d| (h, levels[d])))?;
                return Ok((w, value));
            }
            digits[i] += 1;
            if digits[i] < levels.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(0.2, 1.0, 0.4).unwrap()
    }

    fn two_level() -> PiecewiseWeight {
        PiecewiseWeight::new(vec![0.0, 0.5, 1.0], vec![-1.0, 1.0]).unwrap()
    }

    #[test]
    fn eval_uses_right_continuity() {
        let m = two_level();
        assert_eq!(m.eval(0.25).unwrap(), -1.0);
        assert_eq!(m.eval(0.5).unwrap(), 1.0);
        assert_eq!(m.eval(1.0).unwrap(), 1.0);
        assert_eq!(m.eval(0.0).unwrap(), -1.0);
        assert!(matches!(m.eval(1.5), Err(Error::Domain { .. })));
        assert!(matches!(m.eval(-0.1), Err(Error::Domain { .. })));
        let k = PiecewiseWeight::constant(2.5);
        assert_eq!(k.eval(0.7).unwrap(), 2.5);
    }

    #[test]
    fn rejects_malformed_weights() {
        assert!(PiecewiseWeight::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(PiecewiseWeight::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(PiecewiseWeight::new(vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(PiecewiseWeight::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
        assert!(PiecewiseWeight::new(vec![0.0, 0.5], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn mass_examples() {
        assert_eq!(PiecewiseWeight::constant(-1.0).mass(), -1.0);
        let bb = BangBangInterval::new(0.2, 0.3, params()).unwrap().weight();
        assert!((bb.mass() + 0.4).abs() < 1e-15);
        let p = ModelParams::new(0.0, 2.0, 0.25).unwrap();
        let ds = p.delta_star();
        let m = PiecewiseWeight::new(vec![0.0, ds, 1.0], vec![2.0, -1.0]).unwrap();
        assert!((m.mass() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn exp_mass_examples() {
        let m = two_level();
        assert_eq!(m.exp_mass(0.0), m.mass());
        let c = PiecewiseWeight::constant(-1.0);
        for a in [0.0, 0.3, 2.0] {
            assert!((c.exp_mass(a) + (-a).exp()).abs() < 1e-15);
        }
        let p = params();
        let bb = BangBangInterval::boundary(p).weight();
        assert!(bb.exp_mass(abar(&p)).abs() < 1e-12);
    }

    #[test]
    fn abar_matches_closed_form_example() {
        let a = abar(&params());
        assert!((a - 0.5 * (7.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((a - 0.423_648_930_193_601_9).abs() < 1e-12);
        let tiny = ModelParams::new(0.0, 1.0, 1e-12).unwrap();
        assert!(abar(&tiny) < 1e-11);
    }

    #[test]
    fn alpha_star_of_optimal_bang_bang_is_abar() {
        for (k, m0) in [(1.0, 0.4), (0.5, 0.1), (2.0, 0.7), (5.0, 0.05)] {
            let p = ModelParams::new(0.0, k, m0).unwrap();
            for w in [BangBangInterval::boundary(p).weight(), BangBangInterval::centered(p).weight()] {
                assert!((alpha_star(&w) - abar(&p)).abs() < 1e-10, "kappa={k} m0={m0}");
            }
        }
    }

    #[test]
    fn alpha_star_sentinels() {
        assert_eq!(alpha_star(&PiecewiseWeight::constant(-1.0)), f64::INFINITY);
        let nonneg = PiecewiseWeight::new(vec![0.0, 0.7, 1.0], vec![1.0, -1.0]).unwrap();
        assert_eq!(alpha_star(&nonneg), 0.0);
        // positive part too small for any alpha below the bracket
        let tiny = PiecewiseWeight::new(vec![0.0, 1e-30, 1.0], vec![0.01, -1.0]).unwrap();
        assert_eq!(alpha_star(&tiny), f64::INFINITY);
    }

    #[test]
    fn admissibility_examples() {
        let p = params();
        let bb = BangBangInterval::new(0.2, p.delta_star(), p).unwrap().weight();
        assert!(is_admissible(&bb, &p));
        assert!(matches!(
            check_admissible(&PiecewiseWeight::constant(1.0), &p),
            Err(Inadmissible::MassExceeded { .. })
        ));
        assert_eq!(
            check_admissible(&PiecewiseWeight::constant(-1.0), &p),
            Err(Inadmissible::NoPositivePart)
        );
        let high = PiecewiseWeight::new(vec![0.0, 0.1, 1.0], vec![3.0, -1.0]).unwrap();
        assert!(matches!(check_admissible(&high, &p), Err(Inadmissible::OutOfBounds { piece: 0, .. })));
        let short = PiecewiseWeight::new(vec![0.0, 0.5], vec![-1.0]).unwrap();
        assert!(matches!(check_admissible(&short, &p), Err(Inadmissible::NotUnitDomain { .. })));
    }

    #[test]
    fn canonical_and_unimodal() {
        let m = PiecewiseWeight::new(vec![0.0, 0.2, 0.4, 0.7, 1.0], vec![-1.0, 1.0, 1.0, -1.0]).unwrap();
        let c = m.canonical();
        assert_eq!(c.values(), &[-1.0, 1.0, -1.0]);
        assert_eq!(c.breakpoints(), &[0.0, 0.2, 0.7, 1.0]);
        assert!(m.is_unimodal());
        let valley = PiecewiseWeight::new(vec![0.0, 0.3, 0.6, 1.0], vec![1.0, -1.0, 1.0]).unwrap();
        assert!(!valley.is_unimodal());
        assert!(valley.is_bang_bang(1.0));
    }

    #[test]
    fn json_round_trip_evaluates_identically() {
        let m = PiecewiseWeight::new(vec![0.0, 0.123456789, 0.5, 1.0], vec![-1.0, 0.75, -0.2]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"breakpoints\""));
        let back: PiecewiseWeight = serde_json::from_str(&s).unwrap();
        for i in 0..997 {
            let x = (i as f64 + 0.5) / 997.0;
            assert_eq!(m.eval(x).unwrap(), back.eval(x).unwrap());
        }
        let bad = r#"{"breakpoints":[0,0.5,0.4,1],"values":[1,2,3]}"#;
        assert!(serde_json::from_str::<PiecewiseWeight>(bad).is_err());
        let extra = r#"{"breakpoints":[0,1],"values":[1],"extra":2}"#;
        assert!(serde_json::from_str::<PiecewiseWeight>(extra).is_err());
    }

    #[test]
    fn brute_force_prefers_extreme_levels() {
        let p = params();
        let (w, value) = brute_force_expmass_max(&p, 10, &[-1.0, 0.0, 1.0]).unwrap();
        assert!(w.is_bang_bang(1.0), "optimizer {:?}", w);
        assert!((w.mass() + 0.4).abs() < 1e-12);
        let expected = (3.0 * 0.2f64.exp() - 7.0 * (-0.2f64).exp()) / 10.0;
        assert!((value - expected).abs() < 1e-14);
    }

    #[test]
    fn brute_force_value_is_arrangement_independent() {
        let p = params();
        let (_, best) = brute_force_expmass_max(&p, 10, &[-1.0, 1.0]).unwrap();
        let kcells = (10.0 * p.delta_star() + 1e-9).floor() as usize;
        for start in 0..=(10 - kcells) {
            let w = PiecewiseWeight::from_pieces(
                (0..10).map(|i| (0.1, if (start..start + kcells).contains(&i) { 1.0 } else { -1.0 })),
            )
            .unwrap();
            assert!((w.exp_mass(p.alpha) - best).abs() < 1e-14);
        }
    }

    #[test]
    fn brute_force_at_zero_advection_hits_mass_bound() {
        let p = ModelParams::new(0.0, 1.0, 0.4).unwrap();
        let (_, best) = brute_force_expmass_max(&p, 10, &[-1.0, 0.0, 1.0]).unwrap();
        assert!((best + 0.4).abs() < 1e-14);
    }

    #[test]
    fn brute_force_rejects_large_search() {
        let p = params();
        assert!(matches!(
            brute_force_expmass_max(&p, 13, &[-1.0, 1.0]),
            Err(Error::SearchSpace { .. })
        ));
        assert!(matches!(
            brute_force_expmass_max(&p, 4, &[-1.0, -0.5, 0.0, 0.5, 1.0]),
            Err(Error::SearchSpace { .. })
        ));
    }

    #[test]
    fn boundary_constructor_maps_infinity_to_dirichlet() {
        assert_eq!(Boundary::robin(f64::INFINITY).unwrap(), Boundary::Dirichlet);
        assert!(Boundary::robin(-1.0).is_err());
        assert!(Boundary::neumann().is_neumann());
        let s = serde_json::to_string(&Boundary::Robin(2.0)).unwrap();
        assert_eq!(s, r#"{"robin":2.0}"#);
        assert_eq!(serde_json::from_str::<Boundary>(r#""dirichlet""#).unwrap(), Boundary::Dirichlet);
    }
}
