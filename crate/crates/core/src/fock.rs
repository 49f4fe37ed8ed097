//! The space `V_P = M(1) ⊗ C[P]` for `P = ½ℤα`, `⟨α, α⟩ = 2`, at level 1.
//!
//! A basis state is a Heisenberg monomial `α(-n_1)···α(-n_j)` (stored as the
//! descending list of `n_i`) tensored with a lattice vector `e^{(k/2)α}`.
//! Vertex operators of lattice vectors are applied component by component:
//! each coefficient of `Y(e^λ, x) v` is a finite, exact computation.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::partitions_exact;
use crate::rational::{self, Rational};
use crate::series::Bidegree;

/// The lattice vector `(k/2)·α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub k: i64,
}

impl LatticePoint {
    pub const ZERO: LatticePoint = LatticePoint { k: 0 };
    pub const HALF_ALPHA: LatticePoint = LatticePoint { k: 1 };
    pub const ALPHA: LatticePoint = LatticePoint { k: 2 };

    pub const fn new(k: i64) -> Self {
        LatticePoint { k }
    }

    /// `⟨(k/2)α, (m/2)α⟩ = k m / 2`.
    pub fn pairing(self, other: LatticePoint) -> Rational {
        rational::frac(self.k * other.k, 2)
    }

    /// Twice the pairing; always an integer.
    pub fn pairing2(self, other: LatticePoint) -> i64 {
        self.k * other.k
    }

    pub fn charge2(self) -> i64 {
        self.k
    }

    /// `4 · ⟨λ,λ⟩/2 = k²`.
    pub fn weight4(self) -> i64 {
        self.k * self.k
    }

    /// Lies in the root lattice `Q = ℤα`.
    pub fn in_root_lattice(self) -> bool {
        self.k % 2 == 0
    }
}

impl std::ops::Add for LatticePoint {
    type Output = LatticePoint;

    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.k + rhs.k)
    }
}

impl std::ops::Neg for LatticePoint {
    type Output = LatticePoint;

    fn neg(self) -> Self {
        LatticePoint::new(-self.k)
    }
}

/// Product of creation operators `α(-n)`, parts kept in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergMonomial {
    parts: Vec<u32>,
}

impl HeisenbergMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Usage("Heisenberg parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(HeisenbergMonomial { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of parts, i.e. the weight contributed by the monomial.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn multiplicity(&self, n: u32) -> usize {
        self.parts.iter().filter(|&&p| p == n).count()
    }

    fn with_part(&self, n: u32) -> Self {
        let mut parts = self.parts.clone();
        let at = parts.partition_point(|&p| p > n);
        parts.insert(at, n);
        HeisenbergMonomial { parts }
    }

    fn without_part(&self, n: u32) -> Option<Self> {
        let at = self.parts.iter().position(|&p| p == n)?;
        let mut parts = self.parts.clone();
        parts.remove(at);
        Some(HeisenbergMonomial { parts })
    }

    fn times(&self, other: &[u32]) -> Self {
        let mut parts = Vec::with_capacity(self.parts.len() + other.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(other);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        HeisenbergMonomial { parts }
    }

    /// `(distinct part, multiplicity)` pairs, largest part first.
    fn grouped(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub mono: HeisenbergMonomial,
    pub lattice: LatticePoint,
}

impl BasisState {
    pub fn new(mono: HeisenbergMonomial, lattice: LatticePoint) -> Self {
        BasisState { mono, lattice }
    }

    /// `1 ⊗ e^λ`.
    pub fn lattice_only(lattice: LatticePoint) -> Self {
        BasisState {
            mono: HeisenbergMonomial::one(),
            lattice,
        }
    }

    pub fn bidegree(&self) -> Bidegree {
        Bidegree::new(
            self.lattice.charge2(),
            4 * i64::from(self.mono.degree()) + self.lattice.weight4(),
        )
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.parts.is_empty() {
            write!(f, "1")?;
        } else {
            let hs: Vec<String> = self.mono.parts.iter().map(|p| format!("h(-{p})")).collect();
            write!(f, "{}", hs.join(""))?;
        }
        write!(f, "⊗e^({}/2 α)", self.lattice.k)
    }
}

/// Finite rational combination of basis states.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FockJson", into = "FockJson")]
pub struct FockVector {
    terms: BTreeMap<BasisState, Rational>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: BasisState) -> Self {
        let mut v = Self::zero();
        v.add_term(state, Rational::one());
        v
    }

    /// `1 ⊗ e^λ`.
    pub fn lattice(lattice: LatticePoint) -> Self {
        Self::basis(BasisState::lattice_only(lattice))
    }

    /// The highest weight vector `v_{Λ0} = 1`.
    pub fn vacuum() -> Self {
        Self::lattice(LatticePoint::ZERO)
    }

    /// The highest weight vector `v_{Λ1} = e^{α/2}`.
    pub fn charged_vacuum() -> Self {
        Self::lattice(LatticePoint::HALF_ALPHA)
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

    pub fn terms(&self) -> impl Iterator<Item = (&BasisState, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, state: &BasisState) -> Rational {
        self.terms
            .get(state)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, state: BasisState, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(state) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, by: &Rational) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * by);
        }
        out
    }

    /// The common bidegree of all terms, if there is one. `None` for the
    /// zero vector and for inhomogeneous vectors.
    pub fn homogeneous_bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(BasisState::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn in_root_lattice_part(&self) -> bool {
        self.terms.keys().all(|s| s.lattice.in_root_lattice())
    }

    pub fn into_terms(self) -> BTreeMap<BasisState, Rational> {
        self.terms
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fock vector serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl FromIterator<(BasisState, Rational)> for FockVector {
    fn from_iter<I: IntoIterator<Item = (BasisState, Rational)>>(iter: I) -> Self {
        let mut v = FockVector::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("({})·{}", rational::display(c), s))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct FockJson {
    terms: Vec<FockTermJson>,
}

#[derive(Serialize, Deserialize)]
struct FockTermJson {
    parts: Vec<u32>,
    k: i64,
    coeff: String,
}

impl From<FockVector> for FockJson {
    fn from(v: FockVector) -> Self {
        FockJson {
            terms: v
                .terms
                .into_iter()
                .map(|(s, c)| FockTermJson {
                    parts: s.mono.parts,
                    k: s.lattice.k,
                    coeff: rational::to_text(&c),
                })
                .collect(),
        }
    }
}

impl TryFrom<FockJson> for FockVector {
    type Error = Error;

    fn try_from(j: FockJson) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for t in j.terms {
            if t.parts.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::Parse(format!("parts not descending: {:?}", t.parts)));
            }
            let state = BasisState::new(
                HeisenbergMonomial::new(t.parts).map_err(|e| Error::Parse(e.to_string()))?,
                LatticePoint::new(t.k),
            );
            let c = rational::from_text(&t.coeff)?;
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient for {state}")));
            }
            if terms.insert(state.clone(), c).is_some() {
                return Err(Error::Parse(format!("duplicate state {state}")));
            }
        }
        Ok(FockVector { terms })
    }
}

/// The Heisenberg operator `α(n)`.
///
/// `n < 0` multiplies by `α(n)`; `n > 0` acts as `2n ∂/∂α(-n)`; `n = 0`
/// multiplies `e^{(k/2)α}` by `⟨α, (k/2)α⟩ = k`.
pub fn heis_act(n: i64, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (s, c) in &v.terms {
        match n {
            0 => out.add_term(s.clone(), c * rational::int(s.lattice.k)),
            n if n < 0 => {
                let mono = s.mono.with_part(n.unsigned_abs() as u32);
                out.add_term(BasisState::new(mono, s.lattice), c.clone());
            }
            n => {
                let part = n as u32;
                let mult = s.mono.multiplicity(part) as i64;
                if let Some(mono) = s.mono.without_part(part) {
                    out.add_term(
                        BasisState::new(mono, s.lattice),
                        c * rational::int(2 * n * mult),
                    );
                }
            }
        }
    }
    out
}

/// `e^μ`: shifts every lattice label by `μ`.
pub fn lattice_shift(mu: LatticePoint, v: &FockVector) -> FockVector {
    v.terms
        .iter()
        .map(|(s, c)| (BasisState::new(s.mono.clone(), s.lattice + mu), c.clone()))
        .collect()
}

/// Coefficients of the creation factor `E^-(-λ, x) = exp(Σ_{m≥1} λ(-m) x^m / m)`
/// at order `x^e`, as `(parts, coefficient)` pairs.
///
/// With `λ = (kλ/2)α` the order-`e` piece is
/// `Σ_{π ⊢ e} Π_m (kλ / 2m)^{n_m} / n_m! · α(-m)^{n_m}`.
fn creation_terms(k_lambda: i64, e: u32) -> Vec<(Vec<u32>, Rational)> {
    if e == 0 {
        return vec![(Vec::new(), Rational::one())];
    }
    let mut out = Vec::new();
    for len in 1..=e {
        for parts in partitions_exact(e, len, 1) {
            let mut coeff = Rational::one();
            let mut i = 0;
            while i < parts.len() {
                let m = parts[i];
                let mut j = i;
                while j < parts.len() && parts[j] == m {
                    j += 1;
                }
                let mult = (j - i) as u32;
                let base = rational::frac(k_lambda, 2 * i64::from(m));
                let mut fact = BigInt::one();
                for t in 2..=mult {
                    fact *= t;
                }
                coeff *= num_traits::pow(base, mult as usize) / Rational::from_integer(fact);
                i = j;
            }
            if !coeff.is_zero() {
                out.push((parts, coeff));
            }
        }
    }
    out
}

type CreationTerms = Rc<Vec<(Vec<u32>, Rational)>>;

thread_local! {
    static CREATION: RefCell<HashMap<(i64, u32), CreationTerms>> = RefCell::new(HashMap::new());
}

fn cached_creation_terms(k_lambda: i64, e: u32) -> CreationTerms {
    CREATION.with(|cache| {
        if let Some(hit) = cache.borrow().get(&(k_lambda, e)) {
            return hit.clone();
        }
        let terms = Rc::new(creation_terms(k_lambda, e));
        cache.borrow_mut().insert((k_lambda, e), terms.clone());
        terms
    })
}

/// `E^+(-λ, x)` on a monomial: the substitution `α(-n) ↦ α(-n) - kλ x^{-n}`.
/// Returns `(remaining monomial, coefficient, d)` with `x^{-d}` the power.
fn annihilation_terms(
    k_lambda: i64,
    mono: &HeisenbergMonomial,
) -> Vec<(HeisenbergMonomial, Rational, u32)> {
    let groups = mono.grouped();
    let mut out = vec![(Vec::<u32>::new(), Rational::one(), 0u32)];
    for (part, mult) in groups {
        let mut next = Vec::with_capacity(out.len() * (mult as usize + 1));
        for (kept, coeff, d) in &out {
            for removed in 0..=mult {
                let c = Rational::from_integer(binomial(BigInt::from(mult), BigInt::from(removed)))
                    * num_traits::pow(rational::int(-k_lambda), removed as usize);
                if c.is_zero() {
                    continue;
                }
                let mut parts = kept.clone();
                parts.extend(std::iter::repeat_n(part, (mult - removed) as usize));
                next.push((parts, coeff * &c, d + part * removed));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(parts, c, d)| (HeisenbergMonomial { parts }, c, d))
        .collect()
}

/// Coefficient of `x^{t2/2}` in `Y(1 ⊗ e^λ, x) v`, where
/// `Y(e^λ, x) = E^-(-λ,x) E^+(-λ,x) e^λ x^λ`.
///
/// `t2` is the exponent in half-units. Unreachable exponents give zero.
pub fn vertex_component(lam: LatticePoint, t2: i64, v: &FockVector) -> FockVector {
    // E^+ first; terms landing on the same (lattice, monomial, order) are merged
    // before the E^- expansion
    let mut annihilated: HashMap<(LatticePoint, HeisenbergMonomial, u32), Rational> =
        HashMap::new();
    for (s, c) in &v.terms {
        // x^λ e^μ = x^{⟨λ,μ⟩} e^μ, measured on the incoming lattice label
        let offset2 = t2 - lam.pairing2(s.lattice);
        if offset2 % 2 != 0 {
            continue;
        }
        let delta = offset2 / 2; // e - d
        let target = s.lattice + lam;
        for (kept, ca, d) in annihilation_terms(lam.k, &s.mono) {
            let e = delta + i64::from(d);
            if e < 0 {
                continue;
            }
            *annihilated
                .entry((target, kept, e as u32))
                .or_insert_with(Rational::zero) += c * ca;
        }
    }

    let mut acc: HashMap<BasisState, Rational> = HashMap::new();
    for ((target, kept, e), ca) in annihilated {
        if ca.is_zero() {
            continue;
        }
        let creators = cached_creation_terms(lam.k, e);
        for (parts, cb) in creators.iter() {
            *acc.entry(BasisState::new(kept.times(parts), target))
                .or_insert_with(Rational::zero) += &ca * cb;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `x_α(m)`: the coefficient of `x^{-m-1}` in `Y(e^α, x)`.
pub fn x_alpha(m: i64, v: &FockVector) -> FockVector {
    vertex_component(LatticePoint::ALPHA, 2 * (-m - 1), v)
}

/// Largest `J` such that `x_α(j) v` can be nonzero only for `j < J`, from
/// the minimal weight `(charge2 + 2)²` of the charge sector `x_α` lands in.
pub fn annihilation_bound(v: &FockVector) -> Option<i64> {
    v.terms
        .keys()
        .map(|s| {
            let b = s.bidegree();
            (b.weight4 - (b.charge2 + 2) * (b.charge2 + 2)).div_euclid(4) + 1
        })
        .max()
}

/// `Σ_{i + j = n} x_α(i) x_α(j) v`, the `x^{-n-2}` coefficient of
/// `Y(e^α, x)² v`. The sum runs over `j ∈ [n - J, J]`; outside that window
/// both `x_α(j) v` and `x_α(n - j) x_α(j) v` vanish.
pub fn square_sum(n: i64, v: &FockVector) -> FockVector {
    let Some(bound) = annihilation_bound(v) else {
        return FockVector::zero();
    };
    let mut out = FockVector::zero();
    for j in (n - bound)..=bound {
        let inner = x_alpha(j, v);
        if inner.is_zero() {
            continue;
        }
        out = out.add(&x_alpha(n - j, &inner));
    }
    out
}

/// `e^{iπα/2}` restricted to `V_Q`: `e^{mα} ↦ (-1)^m e^{mα}`.
pub fn phase_on_vq(v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero();
    for (s, c) in &v.terms {
        if !s.lattice.in_root_lattice() {
            return Err(Error::Domain(format!(
                "phase e^(iπα/2) on {s} is not real; only V_Q is supported"
            )));
        }
        let sign = if (s.lattice.k / 2) % 2 == 0 {
            c.clone()
        } else {
            -c.clone()
        };
        out.add_term(s.clone(), sign);
    }
    Ok(out)
}

/// `o(e^{α/2})`: the constant term of `Y(e^{α/2}, x) e^{iπα/2}` on `V_Q`.
pub fn o_operator(v: &FockVector) -> Result<FockVector> {
    let phased = phase_on_vq(v)?;
    Ok(vertex_component(LatticePoint::HALF_ALPHA, 0, &phased))
}

/// The constant factor `e^{α/2}`.
pub fn e_half(v: &FockVector) -> FockVector {
    lattice_shift(LatticePoint::HALF_ALPHA, v)
}

/// Every basis state of `V_P` with `weight4 <= max_weight4`, restricted to
/// `V_Q` when `root_only` is set. Sorted canonically.
pub fn basis_states(max_weight4: i64, root_only: bool) -> Vec<BasisState> {
    let mut out = Vec::new();
    let mut k: i64 = 0;
    while k * k <= max_weight4 {
        let signs: &[i64] = if k == 0 { &[0] } else { &[k, -k] };
        for &lat in signs {
            if root_only && lat % 2 != 0 {
                continue;
            }
            let max_deg = (max_weight4 - k * k) / 4;
            for d in 0..=max_deg as u32 {
                for parts in 0..=d {
                    for p in partitions_exact(d, parts, 1) {
                        out.push(BasisState::new(
                            HeisenbergMonomial { parts: p },
                            LatticePoint::new(lat),
                        ));
                    }
                }
            }
        }
        k += 1;
    }
    out.sort();
    out
}
