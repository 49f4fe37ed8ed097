//! The polynomial model `A = C[y_{-1}, y_{-2}, ...]`, the quadratic relations
//! `r_n = Σ_{i,j<0, i+j=n} y_i y_j`, the ideal they generate and the shift
//! map `S: y_{-1} ↦ 0, y_{-j} ↦ y_{-j+1}`.
//!
//! The ideal is bihomogeneous, so everything reduces to per-component
//! linear algebra in the monomial basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::RowEchelon;
use crate::partitions::partitions_exact;
use crate::principal::{self, Check, ComponentProvider, Label};
use crate::rational::{self, Rational};
use crate::series::{Bidegree, BivariateSeries};

pub use crate::principal::YMonomial;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YPolynomial {
    terms: BTreeMap<YMonomial, Rational>,
}

impl YPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: YMonomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&YMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &YMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: YMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, by: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * by);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.times(b), ca * cb);
            }
        }
        out
    }

    pub fn times_monomial(&self, m: &YMonomial) -> Self {
        self.mul(&YPolynomial::monomial(m.clone(), Rational::one()))
    }

    /// `(charge, weight)` shared by all terms, if homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| (m.charge(), m.weight()));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    fn row(&self) -> BTreeMap<YMonomial, Rational> {
        self.terms.clone()
    }
}

impl fmt::Display for YPolynomial {
    /// Terms in canonical monomial order, e.g. `y_{-3}*y_{-1} + y_{-2}^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if !mag.is_one() {
                write!(f, "{}*", rational::display(&mag))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// `r_n = Σ y_i y_j` over ordered pairs `i, j < 0` with `i + j = n`, `n <= -2`.
pub fn relation(n: i64) -> Result<YPolynomial> {
    if n > -2 {
        return Err(Error::Usage(format!("relation r_n needs n <= -2, got {n}")));
    }
    let total = n.unsigned_abs() as u32;
    let mut p = YPolynomial::zero();
    for a in 1..total {
        let m = YMonomial::new(vec![a, total - a]).expect("positive indices");
        p.add_term(m, Rational::one());
    }
    Ok(p)
}

/// Monomials of `A` with `r` factors and weight `s`.
pub fn monomials(r: u32, s: u32) -> Vec<YMonomial> {
    partitions_exact(s, r, 1)
        .into_iter()
        .map(|p| YMonomial::new(p).expect("positive"))
        .collect()
}

/// Spanning set of the ideal component `(Σ A r_n)_{r,s}`: every `m · r_n`
/// with `m` of charge `r - 2` and weight `s - |n|`.
pub fn ideal_component_span(r: u32, s: u32) -> Vec<YPolynomial> {
    if r < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for k in 2..=s {
        let rel = relation(-i64::from(k)).expect("k >= 2");
        for m in monomials(r - 2, s - k) {
            out.push(rel.times_monomial(&m));
        }
    }
    out
}

fn span_echelon(gens: &[YPolynomial]) -> RowEchelon<YMonomial> {
    let mut e = RowEchelon::new();
    for g in gens {
        e.insert(&g.row());
    }
    e
}

/// `dim (A / Σ A r_n)_{r,s}`.
pub fn quotient_dim(r: u32, s: u32) -> usize {
    let total = monomials(r, s).len();
    total - span_echelon(&ideal_component_span(r, s)).rank()
}

/// Bigraded Hilbert series of `A / Σ A r_n` for charges up to `max_charge`
/// and `weight4 <= cap4`.
pub fn hilbert_series(max_charge: u32, cap4: i64) -> BivariateSeries {
    let max_s = cap4.div_euclid(4).max(-1);
    let cells: Vec<(u32, u32)> = (0..=max_charge)
        .flat_map(|r| (0..=max_s).map(move |s| (r, s as u32)))
        .collect();
    let dims: Vec<((u32, u32), usize)> = cells
        .par_iter()
        .map(|&(r, s)| ((r, s), quotient_dim(r, s)))
        .collect();
    BivariateSeries::from_terms(
        cap4,
        dims.into_iter().map(|((r, s), d)| {
            (
                Bidegree::natural(i64::from(r), i64::from(s)),
                rational::int(d as i64),
            )
        }),
    )
}

/// The algebra map `y_{-1} ↦ 0`, `y_{-j} ↦ y_{-j+1}` (`j >= 2`).
pub fn shift_s(p: &YPolynomial) -> YPolynomial {
    let mut out = YPolynomial::zero();
    for (m, c) in p.terms() {
        if m.indices().contains(&1) {
            continue;
        }
        let lowered =
            YMonomial::new(m.indices().iter().map(|j| j - 1).collect()).expect("indices >= 1");
        out.add_term(lowered, c.clone());
    }
    out
}

/// Raises every index by one: the lifting `y_{-j} ↦ y_{-j-1}`.
pub fn raise(m: &YMonomial) -> YMonomial {
    YMonomial::new(m.indices().iter().map(|j| j + 1).collect()).expect("positive")
}

/// `S(A_{Λ0}) = A_{Λ0}` at desk scale:
///
/// * `S` maps each spanning generator into the ideal component it lands in;
/// * each generator `m · r_n` equals `S(raise(m) · r_{n-2})`.
pub fn verify_s_stability(max_charge: u32, cap4: i64) -> Result<Vec<Check>> {
    let max_s = cap4.div_euclid(4).max(0) as u32;
    let cells: Vec<(u32, u32)> = (2..=max_charge)
        .flat_map(|r| (0..=max_s).map(move |s| (r, s)))
        .collect();
    let results: Vec<(Option<String>, Option<String>)> = cells
        .par_iter()
        .map(|&(r, s)| {
            let mut closed = None;
            let mut onto = None;
            // S lowers weight by the charge
            let image_span = if s >= r {
                span_echelon(&ideal_component_span(r, s - r))
            } else {
                RowEchelon::new()
            };
            for k in 2..=s {
                let rel = relation(-i64::from(k)).expect("k >= 2");
                for m in monomials(r - 2, s - k) {
                    let g = rel.times_monomial(&m);
                    let img = shift_s(&g);
                    if closed.is_none() && !img.is_zero() && !image_span.contains(&img.row()) {
                        closed = Some(format!(
                            "S({g}) = {img} is not in the ideal at (r={r}, s={})",
                            s - r
                        ));
                    }
                    let pre = relation(-i64::from(k) - 2)
                        .expect("k + 2 >= 2")
                        .times_monomial(&raise(&m));
                    if onto.is_none() && shift_s(&pre) != g {
                        onto = Some(format!("S({pre}) != {g}"));
                    }
                }
            }
            (closed, onto)
        })
        .collect();
    let closed = results.iter().find_map(|r| r.0.clone());
    let onto = results.iter().find_map(|r| r.1.clone());
    let mk = |name: &str, bad: Option<String>| match bad {
        None => Check::pass(name),
        Some(ce) => Check::fail(name, ce),
    };
    Ok(vec![
        mk("s_maps_ideal_into_ideal", closed),
        mk("s_hits_every_generator", onto),
    ])
}

/// Hilbert series of `A / Σ A r_n` against the Fock-space character of `W(Λ0)`.
pub fn cross_check_hilbert<P: ComponentProvider>(
    provider: &P,
    max_charge: u32,
    cap4: i64,
) -> Result<Check> {
    let hilbert = hilbert_series(max_charge, cap4);
    let chi0 = principal::character(provider, Label::Vacuum, max_charge, cap4)?;
    Ok(Check::series_equal("hilbert_vs_character", &hilbert, &chi0))
}

/// Dimensions of `A' / B_{Λ1}` obtained from `A_{Λ0}` through the index
/// shift, i.e. from quotient dims at `(r, s - r)`.
pub fn charged_dim_via_shift(r: u32, s_offset: u32) -> usize {
    if s_offset < r {
        return 0;
    }
    quotient_dim(r, s_offset - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::principal::MemoProvider;
    use crate::rational::int;
    use crate::series::diff2_count;
    use proptest::prelude::*;

    fn y(ix: &[u32]) -> YMonomial {
        YMonomial::new(ix.to_vec()).unwrap()
    }

    fn poly(terms: &[(&[u32], i64)]) -> YPolynomial {
        let mut p = YPolynomial::zero();
        for (ix, c) in terms {
            p.add_term(y(ix), int(*c));
        }
        p
    }

    #[test]
    fn relation_examples() {
        assert_eq!(relation(-2).unwrap(), poly(&[(&[1, 1], 1)]));
        assert_eq!(relation(-3).unwrap(), poly(&[(&[2, 1], 2)]));
        assert_eq!(relation(-5).unwrap(), poly(&[(&[4, 1], 2), (&[3, 2], 2)]));
        assert_eq!(relation(-4).unwrap(), poly(&[(&[2, 2], 1), (&[3, 1], 2)]));
        assert!(matches!(relation(-1), Err(Error::Usage(_))));
        assert!(matches!(relation(3), Err(Error::Usage(_))));
    }

    #[test]
    fn relation_is_homogeneous() {
        for n in 2..=14u32 {
            assert_eq!(relation(-i64::from(n)).unwrap().bidegree(), Some((2, n)));
        }
    }

    #[test]
    fn span_examples() {
        assert_eq!(ideal_component_span(2, 2), vec![poly(&[(&[1, 1], 1)])]);
        assert_eq!(ideal_component_span(2, 3), vec![poly(&[(&[2, 1], 2)])]);
        let span = ideal_component_span(3, 5);
        // (m, n): (y_{-3}, r_{-2}), (y_{-2}, r_{-3}), (y_{-1}, r_{-4})
        assert_eq!(span.len(), 3);
        assert!(span.contains(&relation(-2).unwrap().times_monomial(&y(&[3]))));
        assert!(span.contains(&relation(-3).unwrap().times_monomial(&y(&[2]))));
        assert!(span.contains(&relation(-4).unwrap().times_monomial(&y(&[1]))));
        assert!(ideal_component_span(1, 5).is_empty());
    }

    #[test]
    fn hilbert_examples() {
        let h = hilbert_series(3, 48);
        for s in 1..=12 {
            assert_eq!(h.coeff(Bidegree::natural(1, s)), int(1));
        }
        assert_eq!(h.coeff(Bidegree::ZERO), int(1));
        assert_eq!(h.coeff(Bidegree::natural(2, 2)), int(0));
        assert_eq!(h.coeff(Bidegree::natural(2, 6)), int(2));
        assert_eq!(h.coeff(Bidegree::natural(2, 4)), int(1));
    }

    #[test]
    fn hilbert_matches_partition_oracle() {
        let h = hilbert_series(4, 60);
        for r in 0..=4u32 {
            for s in 0..=15u32 {
                let want = diff2_count(s, r, 1) as i64;
                assert_eq!(
                    h.coeff(Bidegree::natural(i64::from(r), i64::from(s))),
                    int(want),
                    "r={r} s={s}"
                );
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_s(&relation(-4).unwrap()), relation(-2).unwrap());
        assert!(shift_s(&relation(-3).unwrap()).is_zero());
        assert!(shift_s(&relation(-2).unwrap()).is_zero());
        assert_eq!(shift_s(&poly(&[(&[3, 2], 1)])), poly(&[(&[2, 1], 1)]));
    }

    #[test]
    fn shift_of_relations() {
        for n in -12..=-4 {
            assert_eq!(
                shift_s(&relation(n).unwrap()),
                relation(n + 2).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn s_stability_examples() {
        // S(y_{-2} r_{-4}) = y_{-1} r_{-2}, which lies in the ideal at (3, 3)
        let g = relation(-4).unwrap().times_monomial(&y(&[2]));
        let img = shift_s(&g);
        assert_eq!(img, relation(-2).unwrap().times_monomial(&y(&[1])));
        assert!(span_echelon(&ideal_component_span(3, 3)).contains(&img.row()));
        // preimage of y_{-1} r_{-3}
        let pre = relation(-5).unwrap().times_monomial(&y(&[2]));
        assert_eq!(
            shift_s(&pre),
            relation(-3).unwrap().times_monomial(&y(&[1]))
        );
        // anything divisible by y_{-1} dies
        assert!(shift_s(&relation(-2).unwrap().times_monomial(&y(&[4]))).is_zero());
    }

    #[test]
    fn s_stability_small() {
        for c in verify_s_stability(4, 48).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn hilbert_cross_check_small() {
        let p = MemoProvider::new();
        let c = cross_check_hilbert(&p, 3, 40).unwrap();
        assert!(c.passed, "{c:?}");
    }

    #[test]
    fn charged_dims_follow_from_shifted_relations() {
        let p = MemoProvider::new();
        for r in 0..=3u32 {
            for s in 0..=12u32 {
                let at = Label::Charged.bidegree(r, i64::from(s));
                let fock_dim = p.component(Label::Charged, at).unwrap().dim;
                assert_eq!(fock_dim, charged_dim_via_shift(r, s), "r={r} s={s}");
            }
        }
    }

    #[test]
    fn relation_dump_format() {
        assert_eq!(
            relation(-4).unwrap().to_string(),
            "y_{-2}^2 + 2*y_{-3}*y_{-1}"
        );
        assert_eq!(
            relation(-2).unwrap().scale(&int(-1)).to_string(),
            "-y_{-1}^2"
        );
    }

    fn arb_poly() -> impl Strategy<Value = YPolynomial> {
        prop::collection::vec((prop::collection::vec(1u32..6, 0..3), -3i64..=3), 0..4).prop_map(
            |terms| {
                let mut p = YPolynomial::zero();
                for (ix, c) in terms {
                    p.add_term(YMonomial::new(ix).unwrap(), int(c));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn shift_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(shift_s(&a.mul(&b)), shift_s(&a).mul(&shift_s(&b)));
        }

        #[test]
        fn relation_symmetric_under_swap(n in 2u32..20) {
            let r = relation(-i64::from(n)).unwrap();
            for (m, c) in r.terms() {
                let ix = m.indices();
                let expect = if ix[0] == ix[1] { 1 } else { 2 };
                prop_assert_eq!(c.clone(), int(expect));
                prop_assert_eq!(ix[0] + ix[1], n);
            }
        }
    }
}
