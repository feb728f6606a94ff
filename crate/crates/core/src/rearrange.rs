//! Change of variable `y = c(x) = ∫₀ˣ e^{-αm}` and the unimodal rearrangement.
//!
//! Under `c`, a piece of length `Δx` carrying value `v` becomes a piece of
//! length `e^{-αv} Δx`. The inverse map `z = ∫ e^{αm̃} dy` multiplies it back,
//! so every construction here works on exact piece lists.

use log::warn;

use crate::eigensolve::{principal_eigenvalue, Discretization, Principal};
use crate::error::{Error, Result};
use crate::weights::{Boundary, ModelParams, PiecewiseWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Sorts the pieces by value. Lengths are kept, so the result is equimeasurable with `m`.
pub fn monotone_rearrangement(m: &PiecewiseWeight, direction: Direction) -> PiecewiseWeight {
    let mut pieces: Vec<(f64, f64)> = m.lengths().collect();
    sort_pieces(&mut pieces, direction);
    PiecewiseWeight::from_pieces(pieces).expect("sorted pieces form a weight").canonical()
}

fn sort_pieces(pieces: &mut [(f64, f64)], direction: Direction) {
    match direction {
        Direction::Increasing => pieces.sort_by(|a, b| a.1.total_cmp(&b.1)),
        Direction::Decreasing => pieces.sort_by(|a, b| b.1.total_cmp(&a.1)),
    }
}

/// The piecewise-linear map `c` together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeOfVariable {
    pub alpha: f64,
    pub x_breakpoints: Vec<f64>,
    pub y_breakpoints: Vec<f64>,
    /// Weight value on each piece, which fixes the slope `e^{-αv}`.
    pub values: Vec<f64>,
}

impl ChangeOfVariable {
    /// `c(L)`.
    pub fn total(&self) -> f64 {
        *self.y_breakpoints.last().unwrap()
    }

    pub fn forward(&self, x: f64) -> f64 {
        map_linear(&self.x_breakpoints, &self.y_breakpoints, x)
    }

    pub fn inverse(&self, y: f64) -> f64 {
        map_linear(&self.y_breakpoints, &self.x_breakpoints, y)
    }
}

fn map_linear(from: &[f64], to: &[f64], t: f64) -> f64 {
    let i = from.partition_point(|&b| b <= t).clamp(1, from.len() - 1);
    let (a, b) = (from[i - 1], from[i]);
    let s = (t - a) / (b - a);
    if s >= 1.0 {
        return to[i];
    }
    to[i - 1] + s * (to[i] - to[i - 1])
}

/// `c` and `m̃ = m ∘ c⁻¹` on `(0, c(L))`.
pub fn change_of_variable_forward(m: &PiecewiseWeight, alpha: f64) -> Result<(ChangeOfVariable, PiecewiseWeight)> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {alpha}")));
    }
    let m_tilde = PiecewiseWeight::from_pieces(m.lengths().map(|(l, v)| (l * (-alpha * v).exp(), v)))?;
    let cov = ChangeOfVariable {
        alpha,
        x_breakpoints: m.breakpoints().to_vec(),
        y_breakpoints: m_tilde.breakpoints().to_vec(),
        values: m.values().to_vec(),
    };
    Ok((cov, m_tilde))
}

/// Maps a weight on `(0, Y)` back through `z = ∫ e^{αm̃} dy`.
///
/// If the image length is within `1e-12` of one it is snapped to exactly one,
/// which absorbs the rounding of the forward and inverse scalings.
pub fn change_of_variable_inverse(m_tilde: &PiecewiseWeight, alpha: f64) -> Result<PiecewiseWeight> {
    let w = PiecewiseWeight::from_pieces(m_tilde.lengths().map(|(l, v)| (l * (alpha * v).exp(), v)))?;
    if w.length() != 1.0 && (w.length() - 1.0).abs() <= 1e-12 {
        let mut bps = w.breakpoints().to_vec();
        *bps.last_mut().unwrap() = 1.0;
        return PiecewiseWeight::new(bps, w.values().to_vec());
    }
    Ok(w)
}

/// `∫ m̃ e^{αm̃} dy`, which equals `∫ m dx` for `m̃` produced by the forward map.
pub fn transformed_mass(m_tilde: &PiecewiseWeight, alpha: f64) -> f64 {
    m_tilde.exp_mass(alpha)
}

/// `∫ e^{αm̃} dy`, the length of the inverse image.
pub fn transformed_length(m_tilde: &PiecewiseWeight, alpha: f64) -> f64 {
    m_tilde.lengths().map(|(l, v)| l * (alpha * v).exp()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedPair {
    /// The rearranged weight on `(0,1)`.
    pub m_r: PiecewiseWeight,
    /// `m̃` before and after rearrangement, both on `(0, c(1))`.
    pub m_tilde: PiecewiseWeight,
    pub m_tilde_r: PiecewiseWeight,
    pub x_plus: f64,
    pub y_plus: f64,
    /// Principal eigenvalue of the input weight.
    pub lambda: f64,
}

/// Splits `m̃` at `y⁺`, sorts the left part increasingly and the right part
/// decreasingly.
pub fn split_rearrange(m_tilde: &PiecewiseWeight, y_plus: f64) -> Result<PiecewiseWeight> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (a, b, v) in m_tilde.pieces() {
        if b <= y_plus {
            left.push((b - a, v));
        } else if a >= y_plus {
            right.push((b - a, v));
        } else {
            left.push((y_plus - a, v));
            right.push((b - y_plus, v));
        }
    }
    sort_pieces(&mut left, Direction::Increasing);
    sort_pieces(&mut right, Direction::Decreasing);
    Ok(PiecewiseWeight::from_pieces(left.into_iter().chain(right))?.canonical())
}

/// Unimodal rearrangement around the first maximum of the principal eigenfunction.
///
/// In the Neumann zero regime the eigenfunction is constant, so `x⁺ = 0` and
/// the result is the decreasing rearrangement.
pub fn unimodal_rearrangement(
    m: &PiecewiseWeight,
    params: &ModelParams,
    bc: Boundary,
    disc: &Discretization,
) -> Result<RearrangedPair> {
    if params.alpha > 0.5 {
        warn!("alpha = {} > 1/2: the rearrangement need not decrease the eigenvalue", params.alpha);
    }
    let principal = principal_eigenvalue(m, params, bc, disc)?;
    let (x_plus, lambda) = match &principal {
        Principal::Positive(pair) => (pair.argmax_node(), pair.lambda),
        Principal::ZeroRegime => (0.0, 0.0),
    };
    let (cov, m_tilde) = change_of_variable_forward(m, params.alpha)?;
    let y_plus = cov.forward(x_plus);
    let m_tilde_r = split_rearrange(&m_tilde, y_plus)?;
    let m_r = change_of_variable_inverse(&m_tilde_r, params.alpha)?.canonical();
    Ok(RearrangedPair { m_r, m_tilde, m_tilde_r, x_plus, y_plus, lambda })
}
