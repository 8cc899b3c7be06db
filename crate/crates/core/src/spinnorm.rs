//! Spin norms `‖{μ−ρ}+ρ‖`, minima along pencils `δ + nβ` with `β` the
//! highest root, and the equality case of the Dirac inequality.

use crate::error::{Error, Result};
use crate::rootsystem::RootDatum;
use crate::weight::Weight;
use crate::Rational;

/// Minimum of the spin norm along `{δ + nβ : n ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilQuery {
    pub delta: Weight,
    pub result_min_norm_sq: Rational,
    pub achieved_at_n: u32,
    /// First `n` at which the scan stopped.
    pub terminated_at: u32,
}

fn check_k_type(datum: &RootDatum, mu: &Weight) -> Result<()> {
    mu.check_rank(datum.rank())?;
    if !mu.is_dominant() {
        return Err(Error::NotDominant(mu.to_string()));
    }
    if !mu.is_integral() {
        return Err(Error::NotIntegral(mu.to_string()));
    }
    Ok(())
}

/// `‖{μ−ρ}+ρ‖²` scaled by the form denominator.
pub(crate) fn spin_sq_scaled(datum: &RootDatum, mu: &Weight) -> i64 {
    let shifted = datum.dominant_conjugate(&(*mu - datum.rho())) + datum.rho();
    datum.scaled_inner(shifted.doubled(), shifted.doubled())
}

pub fn spin_norm_sq(datum: &RootDatum, mu: &Weight) -> Result<Rational> {
    check_k_type(datum, mu)?;
    Ok(Rational::new(spin_sq_scaled(datum, mu), datum.form_denominator()))
}

/// Scaled pencil minimum: `(min, argmin, stop)`.
///
/// Since `{μ−ρ}` is dominant, `‖{μ−ρ}+ρ‖² ≥ ‖μ−ρ‖² + ‖ρ‖²`. The right side is
/// a convex quadratic in `n`; once past its vertex and above the best value,
/// no later member can improve on the minimum.
pub(crate) fn pencil_min_scaled(datum: &RootDatum, delta: &Weight) -> (i64, u32, u32) {
    let beta = datum.highest_root();
    let rho = datum.rho();
    let rho_sq = datum.scaled_inner(rho.doubled(), rho.doubled());
    let base = *delta - rho;
    let a = datum.scaled_inner(beta.doubled(), beta.doubled());
    let b = datum.scaled_inner(base.doubled(), beta.doubled());
    let c = datum.scaled_inner(base.doubled(), base.doubled());
    let lower = |n: i64| c + 2 * b * n + a * n * n + rho_sq;
    let past_vertex = |n: i64| a * n + b >= 0;

    let mut best = i64::MAX;
    let mut best_n = 0u32;
    let mut mu = *delta;
    let mut n = 0u32;
    loop {
        if past_vertex(n as i64) && lower(n as i64) > best {
            break;
        }
        let v = spin_sq_scaled(datum, &mu);
        if v < best {
            best = v;
            best_n = n;
        }
        mu = mu + beta;
        n += 1;
    }
    for k in 0..5 {
        let probe = *delta + (n as i32 + k) * beta;
        assert!(spin_sq_scaled(datum, &probe) > best, "pencil tail is not monotone");
    }
    (best, best_n, n)
}

pub fn pencil_min(datum: &RootDatum, delta: &Weight) -> Result<PencilQuery> {
    check_k_type(datum, delta)?;
    let (best, at, stop) = pencil_min_scaled(datum, delta);
    Ok(PencilQuery {
        delta: *delta,
        result_min_norm_sq: Rational::new(best, datum.form_denominator()),
        achieved_at_n: at,
        terminated_at: stop,
    })
}

/// `‖μ‖_spin = ‖2λ‖`, the equality case of the Dirac inequality.
pub fn dirac_attained(datum: &RootDatum, mu: &Weight, two_lambda: &Weight) -> Result<bool> {
    check_k_type(datum, mu)?;
    two_lambda.check_rank(datum.rank())?;
    Ok(spin_sq_scaled(datum, mu) == datum.scaled_inner(two_lambda.doubled(), two_lambda.doubled()))
}
