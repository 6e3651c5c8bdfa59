//! Projection of recovered marginals onto the local polytope (or a slack
//! polytope) by per-edge transportation rounding, and vertex rounding.

use crate::error::{Error, Result};
use crate::model::{Assignment, Incidence, Model, Side};
use crate::objective::{MarginalVector, SlackVector};

/// Input mass tolerance of the transportation rounding.
pub const MASS_TOL: f64 = 1e-10;

/// Rounds a nonnegative `d × d` matrix (row-major) onto the transportation
/// polytope `U(r, c)`:
///
/// 1. scale each row `i` by `min(1, r_i / rowsum_i)`;
/// 2. scale each column `j` by `min(1, c_j / colsum_j)`;
/// 3. add `err_r err_cᵀ / ‖err_r‖₁` for the remaining deficits.
///
/// The ℓ₁ movement is at most `2 (‖r - P1‖₁ + ‖c - Pᵀ1‖₁)`.
pub fn round_to_transport(p: &[f64], r: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    let d = r.len();
    if c.len() != d || p.len() != d * d {
        return Err(Error::ShapeMismatch(format!(
            "plan has {} entries for marginals of length {} and {}",
            p.len(),
            d,
            c.len()
        )));
    }
    let (mass_p, mass_r, mass_c) = (p.iter().sum::<f64>(), r.iter().sum::<f64>(), c.iter().sum::<f64>());
    if (mass_r - mass_c).abs() > MASS_TOL || (mass_p - mass_r).abs() > MASS_TOL {
        return Err(Error::InvalidArgument(format!(
            "mass mismatch: plan {mass_p}, rows {mass_r}, columns {mass_c}"
        )));
    }
    if r.iter().chain(c).any(|&x| x < -MASS_TOL) || p.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidArgument("negative mass in transport input".into()));
    }

    let mut out = p.to_vec();
    for (row, &target) in out.chunks_exact_mut(d).zip(r) {
        let sum: f64 = row.iter().sum();
        if sum > target {
            let scale = target.max(0.0) / sum;
            row.iter_mut().for_each(|x| *x *= scale);
        }
    }
    for (j, &target) in c.iter().enumerate() {
        let sum: f64 = (0..d).map(|i| out[i * d + j]).sum();
        if sum > target {
            let scale = target.max(0.0) / sum;
            (0..d).for_each(|i| out[i * d + j] *= scale);
        }
    }
    let err_r: Vec<f64> = (0..d).map(|i| r[i] - out[i * d..(i + 1) * d].iter().sum::<f64>()).collect();
    let err_c: Vec<f64> = (0..d).map(|j| c[j] - (0..d).map(|i| out[i * d + j]).sum::<f64>()).collect();
    let norm: f64 = err_r.iter().map(|x| x.abs()).sum();
    if norm > 1e-14 {
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] += err_r[i] * err_c[j] / norm;
            }
        }
    }
    Ok(out)
}

/// Replaces each edge block by its rounding onto
/// `U(μ_i + ν_{e,i}, μ_j + ν_{e,j})`; vertex blocks are copied unchanged.
pub fn proj(model: &Model, mu: &MarginalVector, nu: &SlackVector) -> Result<MarginalVector> {
    mu.check_shape(model)?;
    let mut out = mu.clone();
    for e in 0..model.m() {
        let target = |side: Side| -> Result<Vec<f64>> {
            let base = mu.vertex(model.endpoint(e, side));
            let t: Vec<f64> = base
                .iter()
                .zip(nu.block(Incidence { edge: e, side }))
                .map(|(m, v)| m + v)
                .collect();
            if t.iter().any(|&x| x < -MASS_TOL) || (t.iter().sum::<f64>() - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidArgument(format!(
                    "target marginal for edge {e} ({side:?}) is outside the simplex"
                )));
            }
            Ok(t)
        };
        let rounded = round_to_transport(mu.edge(e), &target(Side::Low)?, &target(Side::High)?)?;
        out.edge_mut(e).copy_from_slice(&rounded);
    }
    Ok(out)
}

/// Projection onto the local polytope itself (`ν = 0`).
pub fn proj_local(model: &Model, mu: &MarginalVector) -> Result<MarginalVector> {
    proj(model, mu, &SlackVector::zeros(model))
}

/// Per-vertex argmax, ties broken toward the smallest label.
pub fn vertex_round(mu: &MarginalVector) -> Assignment {
    let labels = (0..mu.n())
        .map(|i| {
            let block = mu.vertex(i);
            let mut best = 0;
            for (x, &p) in block.iter().enumerate().skip(1) {
                if p > block[best] {
                    best = x;
                }
            }
            best
        })
        .collect();
    Assignment::new(labels)
}
