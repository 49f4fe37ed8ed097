//! Batch checks of the q-series identities and of the vertex operator
//! identities on every basis state up to a weight cap.

use rayon::prelude::*;

use crate::error::Result;
use crate::fock::{self, BasisState, FockVector, LatticePoint};
use crate::principal::Check;
use crate::series::{self, BivariateSeries};

/// `F(x,q) = F(xq,q) + xq F(xq²,q)` for `F = rr_sum(0)` up to `cap4`.
pub fn verify_recursion(cap4: i64) -> Result<Check> {
    let f = series::rr_sum(0, cap4, None)?;
    let residual = series::recursion_residual(&f);
    Ok(Check::series_equal(
        "recursion_residual",
        &residual,
        &BivariateSeries::zero(cap4),
    ))
}

/// Both Rogers-Ramanujan identities at `x = 1` up to `cap4`.
pub fn verify_rr_identities(cap4: i64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (a, residues, name) in [(0, [1, 4], "rr1"), (1, [2, 3], "rr2")] {
        let sum = series::rr_sum(a, cap4, None)?.at_x_equals_one();
        let product = series::rr_product(&residues, cap4)?;
        checks.push(Check::series_equal(name, &sum, &product));
    }
    Ok(checks)
}

fn first_failure(name: &str, found: Vec<Option<String>>) -> Check {
    match found.into_iter().flatten().next() {
        None => Check::pass(name),
        Some(bad) => Check::fail(name, bad),
    }
}

/// Largest `n` for which some `x_α(n-j) x_α(j) v` can be nonzero.
pub fn square_sum_top(state: &BasisState) -> i64 {
    let b = state.bidegree();
    (b.weight4 - (b.charge2 + 4).pow(2)).div_euclid(4)
}

/// `Σ_{i+j=n} x_α(i) x_α(j) v = 0` for every `V_Q` basis state with
/// `weight4 <= cap4`, over the nine lowest output weights `n <= top`.
pub fn verify_square_zero(cap4: i64) -> Check {
    let states = fock::basis_states(cap4, true);
    let found = states
        .par_iter()
        .map(|s| {
            let v = FockVector::basis(s.clone());
            let top = square_sum_top(s);
            (top - 8..=top).find_map(|n| {
                let out = fock::square_sum(n, &v);
                (!out.is_zero()).then(|| format!("n={n}, v={s}: {out}"))
            })
        })
        .collect();
    first_failure("square_zero", found)
}

/// `x_α(m) e^μ = e^μ x_α(m + ⟨α,μ⟩)` for `m ∈ [-6, 6]`, `μ ∈ {α/2, α}` on
/// every `V_P` basis state with `weight4 <= cap4`.
pub fn verify_lattice_shift(cap4: i64) -> Check {
    let states = fock::basis_states(cap4, false);
    let found = states
        .par_iter()
        .map(|s| {
            let v = FockVector::basis(s.clone());
            [LatticePoint::HALF_ALPHA, LatticePoint::ALPHA]
                .into_iter()
                .find_map(|mu| {
                    let d = LatticePoint::ALPHA.pairing2(mu) / 2;
                    (-6..=6).find_map(|m| {
                        let lhs = fock::x_alpha(m, &fock::lattice_shift(mu, &v));
                        let rhs = fock::lattice_shift(mu, &fock::x_alpha(m + d, &v));
                        (lhs != rhs).then(|| format!("m={m}, mu={}α/2, v={s}", mu.k))
                    })
                })
        })
        .collect();
    first_failure("lattice_shift_relation", found)
}

/// `o(e^{α/2}) x_α(m) = x_α(m) o(e^{α/2})` for `m ∈ [-5, 2]` on every `V_Q`
/// basis state with `weight4 <= cap4`.
pub fn verify_commutativity(cap4: i64) -> Result<Check> {
    let states = fock::basis_states(cap4, true);
    let found = states
        .par_iter()
        .map(|s| -> Result<Option<String>> {
            let v = FockVector::basis(s.clone());
            let ov = fock::o_operator(&v)?;
            for m in -5..=2 {
                let lhs = fock::o_operator(&fock::x_alpha(m, &v))?;
                let rhs = fock::x_alpha(m, &ov);
                if lhs != rhs {
                    return Ok(Some(format!("m={m}, v={s}")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_failure("o_commutes_with_x_alpha", found))
}

/// All three operator identities.
pub fn verify_operator_identities(cap4: i64) -> Result<Vec<Check>> {
    Ok(vec![
        verify_square_zero(cap4),
        verify_lattice_shift(cap4),
        verify_commutativity(cap4)?,
    ])
}
