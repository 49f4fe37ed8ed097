//! Truncated bivariate series `Σ c · x^{charge} q^{weight}` with exact
//! rational coefficients.
//!
//! Exponents live on the grid `charge ∈ ½ℤ`, `weight ∈ ¼ℤ` and are stored as
//! the integers `charge2`, `weight4`. Every series carries a hard cap on
//! `weight4`; terms above it are dropped as soon as they are produced.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A (charge, weight) pair in half- and quarter-units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub charge2: i64,
    pub weight4: i64,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree {
        charge2: 0,
        weight4: 0,
    };

    pub const fn new(charge2: i64, weight4: i64) -> Self {
        Bidegree { charge2, weight4 }
    }

    /// Bidegree of `x^r q^s` for integer `r`, `s`.
    pub const fn natural(r: i64, s: i64) -> Self {
        Bidegree {
            charge2: 2 * r,
            weight4: 4 * s,
        }
    }

    pub fn offset(self, by: Bidegree) -> Self {
        Bidegree::new(self.charge2 + by.charge2, self.weight4 + by.weight4)
    }
}

impl Ord for Bidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.weight4, self.charge2).cmp(&(other.weight4, other.charge2))
    }
}

impl PartialOrd for Bidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(charge2={}, weight4={})", self.charge2, self.weight4)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct BivariateSeries {
    cap4: i64,
    terms: BTreeMap<Bidegree, Rational>,
}

impl BivariateSeries {
    pub fn zero(cap4: i64) -> Self {
        BivariateSeries {
            cap4,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cap4: i64) -> Self {
        Self::monomial(cap4, Bidegree::ZERO, Rational::one())
    }

    pub fn monomial(cap4: i64, at: Bidegree, coeff: Rational) -> Self {
        let mut s = Self::zero(cap4);
        s.add_term(at, coeff);
        s
    }

    /// Builds a series from `(bidegree, coefficient)` pairs, accumulating
    /// repeated bidegrees.
    pub fn from_terms<I>(cap4: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (Bidegree, Rational)>,
    {
        let mut s = Self::zero(cap4);
        for (at, c) in terms {
            s.add_term(at, c);
        }
        s
    }

    pub fn cap4(&self) -> i64 {
        self.cap4
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical `(weight4, charge2)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Bidegree, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, at: Bidegree) -> Rational {
        self.terms.get(&at).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · x^at` in place, honouring the cap and dropping zeros.
    pub fn add_term(&mut self, at: Bidegree, c: Rational) {
        if at.weight4 > self.cap4 || c.is_zero() {
            return;
        }
        match self.terms.entry(at) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_caps(&self, other: &Self) -> Result<()> {
        if self.cap4 != other.cap4 {
            return Err(Error::Usage(format!(
                "series caps differ: cap4 {} vs {}",
                self.cap4, other.cap4
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        let mut out = self.clone();
        for (at, c) in &other.terms {
            out.add_term(*at, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, by: &Rational) -> Self {
        Self::from_terms(self.cap4, self.terms.iter().map(|(at, c)| (*at, c * by)))
    }

    /// Cauchy product, truncated at the common cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_caps(other)?;
        let mut out = Self::zero(self.cap4);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let at = a.offset(*b);
                if at.weight4 > self.cap4 {
                    // `other` is sorted by weight4 first
                    break;
                }
                out.add_term(at, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `x^{by.charge2/2} q^{by.weight4/4}`.
    pub fn shift(&self, by: Bidegree) -> Self {
        Self::from_terms(
            self.cap4,
            self.terms.iter().map(|(at, c)| (at.offset(by), c.clone())),
        )
    }

    /// `F(x, q) ↦ F(x q^k, q)`: `x^r q^s ↦ x^r q^{s + k r}`.
    pub fn substitute_x_by_xqk(&self, k: u32) -> Self {
        let k = i64::from(k);
        Self::from_terms(
            self.cap4,
            self.terms.iter().map(|(at, c)| {
                (
                    Bidegree::new(at.charge2, at.weight4 + 2 * k * at.charge2),
                    c.clone(),
                )
            }),
        )
    }

    /// Keeps only the terms with `charge2 <= max_charge2`.
    pub fn restrict_charge(&self, max_charge2: i64) -> Self {
        Self::from_terms(
            self.cap4,
            self.terms
                .iter()
                .filter(|(at, _)| at.charge2 <= max_charge2)
                .map(|(at, c)| (*at, c.clone())),
        )
    }

    /// Same terms, lower cap.
    pub fn truncate(&self, cap4: i64) -> Self {
        Self::from_terms(cap4, self.terms.iter().map(|(at, c)| (*at, c.clone())))
    }

    /// Specialization `x = 1`; the result is x-free (all charges collapse to 0).
    pub fn at_x_equals_one(&self) -> Self {
        Self::from_terms(
            self.cap4,
            self.terms
                .iter()
                .map(|(at, c)| (Bidegree::new(0, at.weight4), c.clone())),
        )
    }

    /// Multiplies by `1 / (1 - q^p)`, `p >= 1`, exactly up to the cap.
    pub fn div_one_minus_q_pow(&self, p: u32) -> Self {
        assert!(p >= 1, "1/(1-q^0) is undefined");
        let step = 4 * i64::from(p);
        // dense per-charge running sums: c'[w] = c[w] + c'[w - step]
        let mut by_charge: BTreeMap<i64, BTreeMap<i64, Rational>> = BTreeMap::new();
        for (at, c) in &self.terms {
            by_charge
                .entry(at.charge2)
                .or_default()
                .insert(at.weight4, c.clone());
        }
        let mut out = Self::zero(self.cap4);
        for (charge2, col) in by_charge {
            let lo = *col.keys().next().expect("non-empty");
            let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
            let mut w = lo;
            while w <= self.cap4 {
                let mut v = col.get(&w).cloned().unwrap_or_else(Rational::zero);
                if let Some(prev) = acc.get(&(w - step)) {
                    v += prev;
                }
                if !v.is_zero() {
                    acc.insert(w, v);
                }
                w += 1;
            }
            for (w, v) in acc {
                out.add_term(Bidegree::new(charge2, w), v);
            }
        }
        out
    }

    /// Every coefficient is a nonnegative integer.
    pub fn is_character_valued(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Smallest bidegree (canonical order) at which the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<Bidegree> {
        let mut keys: Vec<Bidegree> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .find(|k| self.terms.get(k) != other.terms.get(k))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for BivariateSeries {
    /// `1 + x^1 q^1 + ...`, exponents printed as fractions where needed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let exp = |num: i64, den: i64| {
            let r = rational::frac(num, den);
            rational::display(&r)
        };
        for (i, (at, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let mut factors = Vec::new();
            if at.charge2 != 0 {
                factors.push(format!("x^{}", exp(at.charge2, 2)));
            }
            if at.weight4 != 0 {
                factors.push(format!("q^{}", exp(at.weight4, 4)));
            }
            if factors.is_empty() || !mag.is_one() {
                factors.insert(0, rational::display(&mag));
            }
            write!(f, "{}", factors.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    cap4: i64,
    terms: Vec<(i64, i64, String)>,
}

impl From<BivariateSeries> for SeriesJson {
    fn from(s: BivariateSeries) -> Self {
        SeriesJson {
            cap4: s.cap4,
            terms: s
                .terms
                .iter()
                .map(|(at, c)| (at.charge2, at.weight4, rational::to_text(c)))
                .collect(),
        }
    }
}

impl TryFrom<SeriesJson> for BivariateSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (charge2, weight4, c) in j.terms {
            let at = Bidegree::new(charge2, weight4);
            let c = rational::from_text(&c)?;
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient stored at {at}")));
            }
            if weight4 > j.cap4 {
                return Err(Error::Parse(format!("term {at} exceeds cap4 {}", j.cap4)));
            }
            if terms.insert(at, c).is_some() {
                return Err(Error::Parse(format!("duplicate term at {at}")));
            }
        }
        Ok(BivariateSeries {
            cap4: j.cap4,
            terms,
        })
    }
}

/// Truncated `1 / (q)_n = Π_{i=1..n} (1 - q^i)^{-1}`.
pub fn euler_factor_inverse(n: u32, cap4: i64) -> BivariateSeries {
    (1..=n).fold(BivariateSeries::one(cap4), |acc, i| {
        acc.div_one_minus_q_pow(i)
    })
}

/// `Σ_{n>=0} x^n q^{n² + a n} / (q)_n`, `a ∈ {0, 1}`, over `n <= max_charge`.
pub fn rr_sum(a: u32, cap4: i64, max_charge: Option<u32>) -> Result<BivariateSeries> {
    if a > 1 {
        return Err(Error::Usage(format!(
            "rr_sum offset must be 0 or 1, got {a}"
        )));
    }
    let mut out = BivariateSeries::zero(cap4);
    let mut n: u32 = 0;
    loop {
        if max_charge.is_some_and(|m| n > m) {
            break;
        }
        let n64 = i64::from(n);
        let lead = Bidegree::natural(n64, n64 * n64 + i64::from(a) * n64);
        if lead.weight4 > cap4 {
            break;
        }
        let term = euler_factor_inverse(n, cap4).shift(lead);
        out = out.add(&term)?;
        n += 1;
    }
    Ok(out)
}

/// Product side `Π_{p ≡ ±residue (mod 5)} 1/(1 - q^p)` for residues `{1,4}` or `{2,3}`.
pub fn rr_product(residues: &[i64], cap4: i64) -> Result<BivariateSeries> {
    let mut set: Vec<i64> = residues.iter().map(|r| r.rem_euclid(5)).collect();
    set.sort_unstable();
    set.dedup();
    if set != [1, 4] && set != [2, 3] {
        return Err(Error::Usage(format!(
            "residue set must be {{1,4}} or {{2,3}} mod 5, got {residues:?}"
        )));
    }
    let max_part = (cap4 / 4).max(0) as u32;
    Ok((1..=max_part)
        .filter(|p| set.contains(&i64::from(p % 5)))
        .fold(BivariateSeries::one(cap4), |acc, p| {
            acc.div_one_minus_q_pow(p)
        }))
}

/// Number of partitions of `weight` into exactly `parts` parts, each at least
/// `min_part`, with consecutive parts differing by at least 2.
///
/// Counted by walking every such partition; this is the reference the
/// Fock-space and ideal computations are checked against, so it must not use
/// any generating function.
pub fn diff2_count(weight: u32, parts: u32, min_part: u32) -> u64 {
    fn walk(rest: u32, parts: u32, smallest: u32) -> u64 {
        if parts == 0 {
            return u64::from(rest == 0);
        }
        let mut total = 0;
        let mut p = smallest;
        // remaining parts are at least p, p+2, p+4, ...
        while u64::from(p) * u64::from(parts) + u64::from(parts) * (u64::from(parts) - 1)
            <= u64::from(rest)
        {
            total += walk(rest - p, parts - 1, p + 2);
            p += 1;
        }
        total
    }
    walk(weight, parts, min_part.max(1))
}

/// `F(x,q) - F(xq,q) - x q F(xq², q)`.
pub fn recursion_residual(f: &BivariateSeries) -> BivariateSeries {
    let once = f.substitute_x_by_xqk(1);
    let twice = f.substitute_x_by_xqk(2).shift(Bidegree::natural(1, 1));
    f.sub(&once)
        .and_then(|r| r.sub(&twice))
        .expect("caps agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q(cap4: i64, s: i64) -> BivariateSeries {
        BivariateSeries::monomial(cap4, Bidegree::natural(0, s), int(1))
    }

    fn geometric(cap4: i64) -> BivariateSeries {
        BivariateSeries::one(cap4).div_one_minus_q_pow(1)
    }

    #[test]
    fn add_examples() {
        let cap = 40;
        assert!(q(cap, 1).add(&q(cap, 1).neg()).unwrap().is_zero());
        let lhs = BivariateSeries::one(cap)
            .add(&q(cap, 1))
            .unwrap()
            .add(&q(cap, 1))
            .unwrap();
        assert_eq!(lhs.coeff(Bidegree::natural(0, 1)), int(2));
        assert_eq!(lhs.coeff(Bidegree::ZERO), int(1));
        assert_eq!(lhs.len(), 2);
        let chi = rr_sum(0, cap, None).unwrap();
        assert_eq!(chi.add(&BivariateSeries::zero(cap)).unwrap(), chi);
    }

    #[test]
    fn mismatched_caps_are_usage_errors() {
        let a = BivariateSeries::one(8);
        let b = BivariateSeries::one(12);
        assert!(matches!(a.add(&b), Err(Error::Usage(_))));
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn mul_examples() {
        let cap = 48;
        let one_minus_q = BivariateSeries::one(cap).sub(&q(cap, 1)).unwrap();
        assert_eq!(
            one_minus_q.mul(&geometric(cap)).unwrap(),
            BivariateSeries::one(cap)
        );

        let xq = BivariateSeries::monomial(cap, Bidegree::natural(1, 1), int(1));
        assert_eq!(
            xq.mul(&xq).unwrap(),
            BivariateSeries::monomial(cap, Bidegree::natural(2, 2), int(1))
        );

        let one_minus_q2 = BivariateSeries::one(cap).sub(&q(cap, 2)).unwrap();
        let prod = one_minus_q.mul(&one_minus_q2).unwrap();
        let expect = BivariateSeries::from_terms(
            cap,
            [(0, 1), (1, -1), (2, -1), (3, 1)].map(|(s, c)| (Bidegree::natural(0, s), int(c))),
        );
        assert_eq!(prod, expect);
    }

    #[test]
    fn mul_drops_terms_past_cap() {
        let p = q(8, 1).mul(&q(8, 2)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn substitution_examples() {
        let cap = 100;
        let s = BivariateSeries::monomial(cap, Bidegree::natural(2, 3), int(1));
        assert_eq!(
            s.substitute_x_by_xqk(1),
            BivariateSeries::monomial(cap, Bidegree::natural(2, 5), int(1))
        );
        assert_eq!(
            BivariateSeries::one(cap).substitute_x_by_xqk(7),
            BivariateSeries::one(cap)
        );
        let xq = BivariateSeries::monomial(cap, Bidegree::natural(1, 1), int(1));
        assert_eq!(
            xq.substitute_x_by_xqk(2),
            BivariateSeries::monomial(cap, Bidegree::natural(1, 3), int(1))
        );
        // pushed past the cap
        let near = BivariateSeries::monomial(12, Bidegree::natural(1, 3), int(1));
        assert!(near.substitute_x_by_xqk(1).is_zero());
    }

    #[test]
    fn substitution_handles_half_integer_charge() {
        // x^{1/2} q^{1/4} with x -> xq becomes x^{1/2} q^{3/4}
        let s = BivariateSeries::monomial(20, Bidegree::new(1, 1), int(1));
        assert_eq!(
            s.substitute_x_by_xqk(1),
            BivariateSeries::monomial(20, Bidegree::new(1, 3), int(1))
        );
    }

    #[test]
    fn euler_factor_examples() {
        assert_eq!(euler_factor_inverse(0, 40), BivariateSeries::one(40));
        let g = euler_factor_inverse(1, 12);
        assert_eq!(g.len(), 4);
        for s in 0..=3 {
            assert_eq!(g.coeff(Bidegree::natural(0, s)), int(1));
        }
        // partitions of 4 into parts <= 2: (2,2), (2,1,1), (1,1,1,1)
        assert_eq!(
            euler_factor_inverse(2, 40).coeff(Bidegree::natural(0, 4)),
            int(3)
        );
    }

    #[test]
    fn rr_sum_examples() {
        let f = rr_sum(0, 80, None).unwrap();
        assert_eq!(f.coeff(Bidegree::ZERO), int(1));
        assert_eq!(f.coeff(Bidegree::natural(1, 3)), int(1));
        assert_eq!(f.coeff(Bidegree::natural(2, 6)), int(2));
        assert!(matches!(rr_sum(2, 80, None), Err(Error::Usage(_))));
        let capped = rr_sum(0, 80, Some(1)).unwrap();
        assert!(capped.terms().all(|(at, _)| at.charge2 <= 2));
    }

    #[test]
    fn rr_product_examples() {
        let p14 = rr_product(&[1, 4], 40).unwrap();
        assert_eq!(p14.coeff(Bidegree::ZERO), int(1));
        assert_eq!(p14.coeff(Bidegree::natural(0, 4)), int(2));
        let p23 = rr_product(&[3, 2], 40).unwrap();
        assert_eq!(p23.coeff(Bidegree::natural(0, 4)), int(1));
        assert_eq!(rr_product(&[6, -1], 40).unwrap(), p14);
        assert!(matches!(rr_product(&[1, 2], 40), Err(Error::Usage(_))));
        assert!(matches!(rr_product(&[1], 40), Err(Error::Usage(_))));
    }

    #[test]
    fn diff2_examples() {
        assert_eq!(diff2_count(6, 2, 1), 2);
        assert_eq!(diff2_count(3, 2, 1), 0);
        assert_eq!(diff2_count(0, 0, 1), 1);
        assert_eq!(diff2_count(4, 2, 1), 1);
        assert_eq!(diff2_count(1, 1, 2), 0);
        assert_eq!(diff2_count(2, 1, 2), 1);
        assert_eq!(diff2_count(5, 0, 1), 0);
    }

    #[test]
    fn recursion_residual_examples() {
        let cap = 200;
        assert!(recursion_residual(&rr_sum(0, cap, None).unwrap()).is_zero());
        let r = recursion_residual(&BivariateSeries::one(cap));
        assert_eq!(
            r,
            BivariateSeries::monomial(cap, Bidegree::natural(1, 1), int(-1))
        );
        assert!(recursion_residual(&BivariateSeries::zero(cap)).is_zero());
    }

    #[test]
    fn json_layout() {
        let s = BivariateSeries::from_terms(
            12,
            [
                (Bidegree::new(1, 1), int(1)),
                (Bidegree::ZERO, crate::rational::frac(-1, 2)),
            ],
        );
        assert_eq!(
            s.to_json(),
            r#"{"cap4":12,"terms":[[0,0,"-1/2"],[1,1,"1/1"]]}"#
        );
        assert_eq!(BivariateSeries::from_json(&s.to_json()).unwrap(), s);
        assert!(BivariateSeries::from_json(r#"{"cap4":4,"terms":[[0,8,"1/1"]]}"#).is_err());
        assert!(BivariateSeries::from_json(r#"{"cap4":4,"terms":[[0,0,"0/1"]]}"#).is_err());
    }

    #[test]
    fn display_is_readable() {
        let s = BivariateSeries::from_terms(
            12,
            [
                (Bidegree::ZERO, int(1)),
                (Bidegree::new(1, 1), int(-2)),
                (Bidegree::natural(1, 1), int(1)),
            ],
        );
        assert_eq!(s.to_string(), "1 - 2 x^1/2 q^1/4 + x^1 q^1");
        assert_eq!(BivariateSeries::zero(4).to_string(), "0");
    }
}
