//! Principal subspaces `W(Λ0) = U(n̂+)·1` and `W(Λ1) = U(n̂+)·e^{α/2}`.
//!
//! Each bigraded component is computed by applying every monomial in the
//! operators `x_α(-j)` to the highest weight vector and row-reducing the
//! images exactly. Spanning sets use all partitions; the relations among
//! them are found by the rank computation, not assumed.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::OnceCell;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{self, BasisState, FockVector};
use crate::linalg::{Matrix, RowEchelon, SparseRow};
use crate::partitions::partitions_exact;
use crate::rational::{self, Rational};
use crate::series::{self, Bidegree, BivariateSeries};

/// Which level-1 module the principal subspace sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// `Λ0`, highest weight vector `1`.
    Vacuum,
    /// `Λ1`, highest weight vector `e^{α/2}`.
    Charged,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Vacuum => "vacuum",
            Label::Charged => "charged",
        }
    }

    pub fn highest_weight_vector(self) -> FockVector {
        match self {
            Label::Vacuum => FockVector::vacuum(),
            Label::Charged => FockVector::charged_vacuum(),
        }
    }

    /// Bidegree of the highest weight vector.
    pub fn base(self) -> Bidegree {
        match self {
            Label::Vacuum => Bidegree::ZERO,
            Label::Charged => Bidegree::new(1, 1),
        }
    }

    /// Smallest mode `j` used in spanning monomials `x_α(-j)`: `W(Λ1)` is
    /// spanned from `C[y_{-2}, y_{-3}, ...]` since `x_α(-1) e^{α/2} = 0`.
    pub fn min_part(self) -> u32 {
        match self {
            Label::Vacuum => 1,
            Label::Charged => 2,
        }
    }

    /// Bidegree of `x_α(-j_1)···x_α(-j_r) v_Λ` with `Σ j_i = s_offset`.
    pub fn bidegree(self, r: u32, s_offset: i64) -> Bidegree {
        self.base()
            .offset(Bidegree::new(2 * i64::from(r), 4 * s_offset))
    }

    /// Inverse of [`Label::bidegree`]: `(r, s_offset)`, checking the parity
    /// constraints of the sector.
    pub fn charge_and_offset(self, at: Bidegree) -> Result<(u32, i64)> {
        let rel = Bidegree::new(
            at.charge2 - self.base().charge2,
            at.weight4 - self.base().weight4,
        );
        if rel.charge2 < 0 || rel.charge2 % 2 != 0 || rel.weight4.rem_euclid(4) != 0 {
            return Err(Error::Usage(format!(
                "{at} is not a bidegree of W({})",
                self.symbol()
            )));
        }
        Ok(((rel.charge2 / 2) as u32, rel.weight4.div_euclid(4)))
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::Vacuum => "Λ0",
            Label::Charged => "Λ1",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `y_{-j_1} ··· y_{-j_r}`, indices stored in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YMonomial {
    indices: Vec<u32>,
}

impl YMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut indices: Vec<u32>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Usage("y-indices must be positive".into()));
        }
        indices.sort_unstable_by(|a, b| b.cmp(a));
        Ok(YMonomial { indices })
    }

    pub(crate) fn from_sorted(indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] >= w[1]));
        YMonomial { indices }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn charge(&self) -> u32 {
        self.indices.len() as u32
    }

    pub fn weight(&self) -> u32 {
        self.indices.iter().sum()
    }

    pub fn times(&self, other: &YMonomial) -> YMonomial {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        YMonomial::new(indices).expect("indices already positive")
    }
}

impl Ord for YMonomial {
    /// Graded lexicographic: charge, then weight, then the descending index
    /// lists compared lexicographically.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.charge(), self.weight(), &self.indices).cmp(&(
            other.charge(),
            other.weight(),
            &other.indices,
        ))
    }
}

impl PartialOrd for YMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.indices.len() {
            let j = self.indices[i];
            let mult = self.indices[i..].iter().take_while(|&&x| x == j).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "y_{{-{j}}}")?;
            if mult > 1 {
                write!(f, "^{mult}")?;
            }
            i += mult;
        }
        Ok(())
    }
}

/// Monomials spanning `W(Λ)` at `r` factors and weight `s_offset` above the
/// highest weight vector: partitions into exactly `r` parts `>= min_part`.
pub fn enumerate_monomials(label: Label, r: u32, s_offset: i64) -> Vec<YMonomial> {
    if s_offset < 0 {
        return Vec::new();
    }
    partitions_exact(s_offset as u32, r, label.min_part())
        .into_iter()
        .map(YMonomial::from_sorted)
        .collect()
}

/// Applies `x_α(-j)` for the given `j`s, rightmost first, to `v`.
pub fn apply_modes(indices: impl IntoIterator<Item = u32>, v: &FockVector) -> FockVector {
    let mut cur = v.clone();
    for j in indices {
        if cur.is_zero() {
            break;
        }
        cur = fock::x_alpha(-i64::from(j), &cur);
    }
    cur
}

/// `p(x_α(-1), x_α(-2), ...) · v_Λ` for a monomial `p`.
///
/// The factors commute; the smallest mode is applied first, which keeps the
/// intermediate Heisenberg weight low.
pub fn realize(label: Label, m: &YMonomial) -> FockVector {
    apply_modes(
        m.indices.iter().rev().copied(),
        &label.highest_weight_vector(),
    )
}

/// Realizes a batch of monomials, sharing work between common factors.
fn realize_all(label: Label, monomials: &[YMonomial]) -> Vec<FockVector> {
    // memo keyed by the ascending prefix already applied
    let mut memo: HashMap<Vec<u32>, FockVector> = HashMap::new();
    memo.insert(Vec::new(), label.highest_weight_vector());
    monomials
        .iter()
        .map(|m| {
            let asc: Vec<u32> = m.indices.iter().rev().copied().collect();
            let mut known = asc.len();
            while !memo.contains_key(&asc[..known]) {
                known -= 1;
            }
            let mut cur = memo[&asc[..known]].clone();
            for n in known..asc.len() {
                cur = if cur.is_zero() {
                    cur
                } else {
                    fock::x_alpha(-i64::from(asc[n]), &cur)
                };
                memo.insert(asc[..=n].to_vec(), cur.clone());
            }
            cur
        })
        .collect()
}

pub(crate) fn to_row(v: &FockVector) -> SparseRow<BasisState> {
    v.terms().map(|(s, c)| (s.clone(), c.clone())).collect()
}

pub(crate) fn from_row(r: &SparseRow<BasisState>) -> FockVector {
    r.iter().map(|(s, c)| (s.clone(), c.clone())).collect()
}

/// An exact reduced basis of one component `W(Λ)_{r,s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedComponentBasis {
    pub label: Label,
    pub bidegree: Bidegree,
    pub spanning: Vec<(YMonomial, FockVector)>,
    pub reduced: Vec<FockVector>,
    pub dim: usize,
}

impl GradedComponentBasis {
    /// The reduced basis as a row-echelon structure (for membership and
    /// coordinate queries). Rows are already reduced, so this is exact.
    pub fn echelon(&self) -> RowEchelon<BasisState> {
        let mut e = RowEchelon::new();
        for v in &self.reduced {
            e.insert(&to_row(v));
        }
        e
    }

    /// Coordinates of `v` in the reduced basis.
    pub fn coordinates(&self, v: &FockVector) -> Option<Vec<Rational>> {
        self.echelon().coordinates(&to_row(v))
    }

    /// Internal consistency: homogeneity, rank bookkeeping, reduced form.
    pub fn validate(&self) -> Result<()> {
        if self.dim != self.reduced.len() || self.dim > self.spanning.len() {
            return Err(Error::Structural(format!(
                "inconsistent dimension at {}",
                self.bidegree
            )));
        }
        for v in self.spanning.iter().map(|(_, v)| v).chain(&self.reduced) {
            if !v.is_zero() && v.homogeneous_bidegree() != Some(self.bidegree) {
                return Err(Error::Structural(format!(
                    "inhomogeneous vector in component {}",
                    self.bidegree
                )));
            }
        }
        let e = self.echelon();
        if e.rank() != self.dim {
            return Err(Error::Structural(format!(
                "reduced rows dependent at {}",
                self.bidegree
            )));
        }
        if !e
            .rows()
            .zip(&self.reduced)
            .all(|(row, v)| *row == to_row(v))
        {
            return Err(Error::Structural(format!(
                "reduced basis at {} is not in canonical form",
                self.bidegree
            )));
        }
        for (m, v) in &self.spanning {
            if !e.contains(&to_row(v)) {
                return Err(Error::Structural(format!(
                    "image of {m} outside reduced span"
                )));
            }
        }
        Ok(())
    }
}

/// Computes `W(Λ)` at bidegree `at` from scratch.
pub fn component_basis(label: Label, at: Bidegree) -> Result<GradedComponentBasis> {
    let base = label.base();
    let monomials = if at.charge2 < base.charge2 {
        // below the highest weight vector: empty, but the parity must still fit
        let mirrored = Bidegree::new(2 * base.charge2 - at.charge2, at.weight4);
        label.charge_and_offset(mirrored)?;
        Vec::new()
    } else {
        let (r, s_offset) = label.charge_and_offset(at)?;
        enumerate_monomials(label, r, s_offset)
    };
    let images = realize_all(label, &monomials);
    let mut ech = RowEchelon::new();
    for v in &images {
        ech.insert(&to_row(v));
    }
    let reduced: Vec<FockVector> = ech.rows().map(from_row).collect();
    Ok(GradedComponentBasis {
        label,
        bidegree: at,
        dim: reduced.len(),
        spanning: monomials.into_iter().zip(images).collect(),
        reduced,
    })
}

/// Source of component bases; implementations may memoize or persist.
pub trait ComponentProvider: Sync {
    fn component(&self, label: Label, at: Bidegree) -> Result<Arc<GradedComponentBasis>>;
}

type Cell = Arc<OnceCell<Arc<GradedComponentBasis>>>;

/// In-memory memo with one writer per key.
#[derive(Default)]
pub struct MemoProvider {
    cells: Mutex<HashMap<(Label, Bidegree), Cell>>,
}

impl MemoProvider {
    pub fn new() -> Self {
        Self::default()
    }

    /// Memoizes `compute` under `(label, at)`; concurrent callers for the same
    /// key wait for the single computation.
    pub fn get_or_compute<F>(
        &self,
        label: Label,
        at: Bidegree,
        compute: F,
    ) -> Result<Arc<GradedComponentBasis>>
    where
        F: FnOnce() -> Result<GradedComponentBasis>,
    {
        let cell = {
            let mut cells = self.cells.lock().expect("memo lock poisoned");
            cells.entry((label, at)).or_default().clone()
        };
        cell.get_or_try_init(|| compute().map(Arc::new)).cloned()
    }
}

impl ComponentProvider for MemoProvider {
    fn component(&self, label: Label, at: Bidegree) -> Result<Arc<GradedComponentBasis>> {
        self.get_or_compute(label, at, || component_basis(label, at))
    }
}

/// All component bidegrees of `W(Λ)` with at most `max_charge` factors and
/// `weight4 <= cap4`, in canonical order.
pub fn cells(label: Label, max_charge: u32, cap4: i64) -> Vec<Bidegree> {
    let mut out = Vec::new();
    for r in 0..=max_charge {
        let min_offset = i64::from(r * label.min_part());
        let mut s = min_offset;
        while label.bidegree(r, s).weight4 <= cap4 {
            out.push(label.bidegree(r, s));
            s += 1;
        }
    }
    out.sort();
    out
}

/// Fetches the components at `cells` in parallel, preserving order.
pub fn components<P: ComponentProvider>(
    provider: &P,
    label: Label,
    cells: &[Bidegree],
) -> Result<Vec<Arc<GradedComponentBasis>>> {
    cells
        .par_iter()
        .map(|&at| provider.component(label, at))
        .collect()
}

/// `Σ dim W(Λ)_{r,s} x^r q^s` over the cells within the caps.
pub fn character<P: ComponentProvider>(
    provider: &P,
    label: Label,
    max_charge: u32,
    cap4: i64,
) -> Result<BivariateSeries> {
    let cells = cells(label, max_charge, cap4);
    let comps = components(provider, label, &cells)?;
    Ok(BivariateSeries::from_terms(
        cap4,
        comps
            .iter()
            .map(|c| (c.bidegree, rational::int(c.dim as i64))),
    ))
}

/// The closed form the character is compared against: `rr_sum(0)` for `Λ0`
/// and `x^{1/2} q^{1/4} rr_sum(1)` for `Λ1`.
pub fn expected_character(label: Label, max_charge: u32, cap4: i64) -> Result<BivariateSeries> {
    match label {
        Label::Vacuum => series::rr_sum(0, cap4, Some(max_charge)),
        Label::Charged => {
            Ok(series::rr_sum(1, cap4, Some(max_charge))?.shift(Label::Charged.base()))
        }
    }
}

/// Outcome of one named verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// First failing bidegree with the values that disagree.
    pub counterexample: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            counterexample: None,
        }
    }

    pub fn fail(name: impl Into<String>, counterexample: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            counterexample: Some(counterexample.into()),
        }
    }

    /// Compares two series exactly, reporting the first differing coefficient.
    pub fn series_equal(
        name: impl Into<String>,
        lhs: &BivariateSeries,
        rhs: &BivariateSeries,
    ) -> Self {
        match lhs.first_difference(rhs) {
            None => Check::pass(name),
            Some(at) => Check::fail(
                name,
                format!(
                    "{at}: lhs={} rhs={}",
                    rational::to_text(&lhs.coeff(at)),
                    rational::to_text(&rhs.coeff(at))
                ),
            ),
        }
    }
}

/// `dim W(Λ0)_{r,s} = dim W(Λ1)_{r+1/2, r+s+1/4}` for every `Λ0` cell in range.
pub fn verify_shift_relation<P: ComponentProvider>(
    provider: &P,
    max_charge: u32,
    cap4: i64,
) -> Result<Check> {
    let cells = cells(Label::Vacuum, max_charge, cap4);
    let pairs: Vec<(Bidegree, Bidegree)> = cells
        .iter()
        .map(|&at| {
            let (r, s) = Label::Vacuum
                .charge_and_offset(at)
                .expect("cells are valid");
            (at, Label::Charged.bidegree(r, i64::from(r) + s))
        })
        .collect();
    let dims: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<(usize, usize)> {
            Ok((
                provider.component(Label::Vacuum, a)?.dim,
                provider.component(Label::Charged, b)?.dim,
            ))
        })
        .collect::<Result<_>>()?;
    for ((a, b), (da, db)) in pairs.iter().zip(&dims) {
        if da != db {
            return Ok(Check::fail(
                "shift_relation",
                format!("W(Λ0){a} has dim {da}, W(Λ1){b} has dim {db}"),
            ));
        }
    }
    Ok(Check::pass("shift_relation"))
}

/// The complex `W(Λ1)_src --e^{α/2}--> W(Λ0)_mid --o(e^{α/2})--> W(Λ1)_tgt`
/// around one `Λ0` bidegree, with both maps written in the reduced bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCell {
    pub source: Bidegree,
    pub middle: Bidegree,
    pub target: Bidegree,
    pub dim_source: usize,
    pub dim_middle: usize,
    pub dim_target: usize,
    /// `dim_middle × dim_source`.
    pub m_e: Matrix,
    /// `dim_target × dim_middle`.
    pub m_o: Matrix,
}

impl ExactnessCell {
    /// `e^{α/2}` sends charge2 `c` to `c + 1` and adds `2c + 1` to weight4.
    pub fn source_of(middle: Bidegree) -> Bidegree {
        Bidegree::new(middle.charge2 - 1, middle.weight4 - 2 * middle.charge2 + 1)
    }

    /// `o(e^{α/2})` adds 1 to both charge2 and weight4.
    pub fn target_of(middle: Bidegree) -> Bidegree {
        Bidegree::new(middle.charge2 + 1, middle.weight4 + 1)
    }

    pub fn composite_is_zero(&self) -> bool {
        self.m_o.mul(&self.m_e).is_zero()
    }

    pub fn rank_e(&self) -> usize {
        self.m_e.rank()
    }

    pub fn rank_o(&self) -> usize {
        self.m_o.rank()
    }

    pub fn checks(&self) -> [(&'static str, bool); 4] {
        let (re, ro) = (self.rank_e(), self.rank_o());
        [
            ("composite_zero", self.composite_is_zero()),
            ("injective", re == self.dim_source),
            ("surjective", ro == self.dim_target),
            ("exact_middle", self.dim_middle - ro == re),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

fn image_matrix(
    from: &GradedComponentBasis,
    to: &GradedComponentBasis,
    map: impl Fn(&FockVector) -> Result<FockVector>,
    what: &str,
) -> Result<Matrix> {
    let ech = to.echelon();
    let mut cols = Vec::with_capacity(from.dim);
    for b in &from.reduced {
        let img = map(b)?;
        let coords = ech.coordinates(&to_row(&img)).ok_or_else(|| {
            Error::Structural(format!(
                "{what} image of a basis vector at {} leaves {}",
                from.bidegree, to.bidegree
            ))
        })?;
        cols.push(coords);
    }
    Ok(Matrix::from_columns(to.dim, &cols))
}

/// Matrices of `e^{α/2}` into and `o(e^{α/2})` out of `W(Λ0)` at `middle`.
pub fn map_matrices<P: ComponentProvider>(provider: &P, middle: Bidegree) -> Result<ExactnessCell> {
    let source = ExactnessCell::source_of(middle);
    let target = ExactnessCell::target_of(middle);
    let src = provider.component(Label::Charged, source)?;
    let mid = provider.component(Label::Vacuum, middle)?;
    let tgt = provider.component(Label::Charged, target)?;
    let m_e = image_matrix(&src, &mid, |v| Ok(fock::e_half(v)), "e^{α/2}")?;
    let m_o = image_matrix(&mid, &tgt, fock::o_operator, "o(e^{α/2})")?;
    Ok(ExactnessCell {
        source,
        middle,
        target,
        dim_source: src.dim,
        dim_middle: mid.dim,
        dim_target: tgt.dim,
        m_e,
        m_o,
    })
}

#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub cells: Vec<ExactnessCell>,
    pub checks: Vec<Check>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Every `Λ0` bidegree with `weight4 <= cap4` (charges up to the weight).
pub fn exactness_cells(cap4: i64) -> Vec<Bidegree> {
    let max_s = cap4.div_euclid(4);
    let mut out: Vec<Bidegree> = (0..=max_s)
        .flat_map(|s| (0..=s).map(move |r| Bidegree::natural(r, s)))
        .collect();
    out.sort();
    out
}

/// Checks exactness of `0 → W(Λ1) → W(Λ0) → W(Λ1) → 0` at every bidegree
/// with `weight4 <= cap4`, and that the dimension totals reproduce the
/// Euler-characteristic identity coefficientwise.
pub fn verify_exactness<P: ComponentProvider>(provider: &P, cap4: i64) -> Result<ExactnessReport> {
    let middles = exactness_cells(cap4);
    let cells: Vec<ExactnessCell> = middles
        .par_iter()
        .map(|&m| map_matrices(provider, m))
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    for name in ["composite_zero", "injective", "surjective", "exact_middle"] {
        let bad = cells
            .iter()
            .find(|c| c.checks().iter().any(|(n, ok)| *n == name && !ok));
        checks.push(match bad {
            None => Check::pass(name),
            Some(c) => Check::fail(
                name,
                format!(
                    "middle {}: dims src/mid/tgt = {}/{}/{}, rank(M_e)={}, rank(M_o)={}",
                    c.middle,
                    c.dim_source,
                    c.dim_middle,
                    c.dim_target,
                    c.rank_e(),
                    c.rank_o()
                ),
            ),
        });
    }
    let lhs = BivariateSeries::from_terms(
        cap4,
        cells
            .iter()
            .map(|c| (c.middle, rational::int(c.dim_middle as i64))),
    );
    let rhs = BivariateSeries::from_terms(
        cap4,
        cells.iter().map(|c| {
            (
                c.middle,
                rational::int((c.dim_source + c.dim_target) as i64),
            )
        }),
    );
    checks.push(Check::series_equal("euler_totals", &lhs, &rhs));
    Ok(ExactnessReport { cells, checks })
}

#[derive(Clone, Debug)]
pub struct EulerReport {
    pub chi0: BivariateSeries,
    pub chi1: BivariateSeries,
    pub checks: Vec<Check>,
}

/// Checks on computed characters, restricted to `charge <= max_charge` and
/// `weight4 <= cap4`:
///
/// * `χ0 = x^{-1/2}q^{-1/4} χ1(x,q) + x^{1/2}q^{1/4} χ1(xq,q)`
/// * `x^{-1/2}q^{-1/4} χ1(x,q) = χ0(xq,q)`
/// * `χ0(x,q) = χ0(xq,q) + xq χ0(xq²,q)`
pub fn verify_euler<P: ComponentProvider>(
    provider: &P,
    max_charge: u32,
    cap4: i64,
) -> Result<EulerReport> {
    let max_charge2 = 2 * i64::from(max_charge);
    let chi0 = character(provider, Label::Vacuum, max_charge, cap4)?;
    // one extra quarter unit so x^{-1/2}q^{-1/4}χ1 is complete up to cap4
    let chi1 = character(provider, Label::Charged, max_charge, cap4 + 1)?;

    let lowered = chi1.shift(Bidegree::new(-1, -1)).truncate(cap4);
    let raised = chi1
        .substitute_x_by_xqk(1)
        .shift(Bidegree::new(1, 1))
        .truncate(cap4);
    let euler_rhs = lowered.add(&raised)?.restrict_charge(max_charge2);

    let shifted_chi0 = chi0.substitute_x_by_xqk(1);
    let residual = series::recursion_residual(&chi0).restrict_charge(max_charge2);

    let checks = vec![
        Check::series_equal("euler_identity", &chi0, &euler_rhs),
        Check::series_equal(
            "shift_identity_series",
            &lowered.restrict_charge(max_charge2),
            &shifted_chi0,
        ),
        Check::series_equal("rr_recursion", &residual, &BivariateSeries::zero(cap4)),
    ];
    Ok(EulerReport {
        chi0,
        chi1: chi1.truncate(cap4),
        checks,
    })
}

/// Component dimension according to the difference-two partition count.
pub fn oracle_dim(label: Label, at: Bidegree) -> Result<u64> {
    let (r, s) = label.charge_and_offset(at)?;
    if s < 0 {
        return Ok(0);
    }
    Ok(series::diff2_count(s as u32, r, label.min_part()))
}

/// Every component dimension in range agrees with [`oracle_dim`].
pub fn verify_oracle<P: ComponentProvider>(
    provider: &P,
    label: Label,
    max_charge: u32,
    cap4: i64,
) -> Result<Check> {
    let cells = cells(label, max_charge, cap4);
    let comps = components(provider, label, &cells)?;
    for c in comps {
        let want = oracle_dim(label, c.bidegree)?;
        if c.dim as u64 != want {
            return Ok(Check::fail(
                format!("oracle_{}", label.name()),
                format!("{}: rank {} vs diff-2 count {}", c.bidegree, c.dim, want),
            ));
        }
    }
    Ok(Check::pass(format!("oracle_{}", label.name())))
}
