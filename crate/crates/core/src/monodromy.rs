//! Picard-Lefschetz monodromy logarithms, the CKS complex built from them,
//! and the stalk cohomology of the intermediate extension at a nodal point.
//!
//! Near a section with `δ` nodes the discriminant is a normal crossing divisor
//! `t_1 ⋯ t_δ = 0`. The monodromy around `t_i = 0` is the transvection
//! `x ↦ x ± ⟨x, v_i⟩ v_i`, whose logarithm `N_i` has rank one. The stalk
//! cohomology of the intersection cohomology complex is the cohomology of
//!
//! ```text
//! B^p = ⊕_{i_1 < … < i_p} N_{i_1} ⋯ N_{i_p} V
//! ```
//!
//! with the map `N_{i_1} ⋯ N̂_{i_l} ⋯ N_{i_{p+1}} V → N_{i_1} ⋯ N_{i_{p+1}} V`
//! given by `(-1)^{l-1} N_{i_l}`.
//!
//! The complex is assembled for arbitrary commuting nilpotents; concentration
//! in degrees 0 and 1 is then something the tests observe, not something the
//! code assumes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{span_dim, RatMatrix, Rational};

/// Orientation convention for the Picard-Lefschetz formula. Every reported
/// dimension is independent of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PlSign {
    Plus,
    #[default]
    Minus,
}

impl PlSign {
    pub fn as_rational(self) -> Rational {
        match self {
            PlSign::Plus => Rational::one(),
            PlSign::Minus => -Rational::one(),
        }
    }

    pub fn flipped(self) -> PlSign {
        match self {
            PlSign::Plus => PlSign::Minus,
            PlSign::Minus => PlSign::Plus,
        }
    }
}

impl std::str::FromStr for PlSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(PlSign::Plus),
            "-1" | "-" | "minus" => Ok(PlSign::Minus),
            other => Err(Error::Parse(format!("sign must be +1 or -1, got {other:?}"))),
        }
    }
}

/// Local monodromy data at a nodal section: the middle cohomology `V` of a
/// nearby smooth fiber with its intersection pairing, one vanishing cycle per
/// node, and the rank of the constant system in the next degree.
///
/// In JSON `dim` may be omitted; it is then read off the pairing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MonodromyDocument")]
pub struct MonodromyData {
    /// `dim V`.
    pub dim: usize,
    pub pairing: RatMatrix,
    pub cycles: Vec<Vec<Rational>>,
    pub h_ambient: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_dim: Option<u64>,
}

#[derive(Deserialize)]
struct MonodromyDocument {
    #[serde(alias = "m")]
    dim: Option<usize>,
    pairing: RatMatrix,
    cycles: Vec<Vec<Rational>>,
    h_ambient: u64,
    #[serde(default)]
    fiber_dim: Option<u64>,
}

impl TryFrom<MonodromyDocument> for MonodromyData {
    type Error = Error;

    fn try_from(doc: MonodromyDocument) -> Result<Self> {
        let data = MonodromyData {
            dim: doc.dim.unwrap_or(doc.pairing.rows()),
            pairing: doc.pairing,
            cycles: doc.cycles,
            h_ambient: doc.h_ambient,
            fiber_dim: doc.fiber_dim,
        };
        data.check_shapes()?;
        Ok(data)
    }
}

impl MonodromyData {
    /// Checks shapes only. Mathematical invariants are left to [`validate`].
    pub fn new(
        pairing: RatMatrix,
        cycles: Vec<Vec<Rational>>,
        h_ambient: u64,
    ) -> Result<Self> {
        let data = MonodromyData {
            dim: pairing.rows(),
            pairing,
            cycles,
            h_ambient,
            fiber_dim: None,
        };
        data.check_shapes()?;
        Ok(data)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MonodromyDocument = serde_json::from_str(text)?;
        MonodromyData::try_from(doc)
    }

    pub fn delta(&self) -> usize {
        self.cycles.len()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let m = self.dim;
        if self.pairing.rows() != m || self.pairing.cols() != m {
            return Err(Error::Dimension(format!(
                "pairing is {}x{} but dim is {m}",
                self.pairing.rows(),
                self.pairing.cols()
            )));
        }
        if let Some(i) = self.cycles.iter().position(|v| v.len() != m) {
            return Err(Error::Dimension(format!(
                "cycle {i} has length {} but dim is {m}",
                self.cycles[i].len()
            )));
        }
        Ok(())
    }

    /// `⟨x, y⟩ = xᵀ P y`.
    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        pairing_value(&self.pairing, x, y)
    }

    pub fn operators(&self, sign: PlSign) -> Result<Vec<PlOperator>> {
        self.cycles
            .iter()
            .enumerate()
            .map(|(i, v)| pl_operator(&self.pairing, v, sign).map(|op| op.with_index(i)))
            .collect()
    }
}

fn pairing_value(pairing: &RatMatrix, x: &[Rational], y: &[Rational]) -> Rational {
    let py = pairing.mul_vec(y).expect("pairing shape checked");
    x.iter()
        .zip(&py)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// The standard symplectic form on `Q^m` (`m` even): blocks `[[0, 1], [-1, 0]]`
/// pairing `e_{2i}` with `e_{2i+1}`.
pub fn symplectic_form(m: usize) -> Result<RatMatrix> {
    if !m.is_multiple_of(2) {
        return Err(Error::Input(format!("symplectic form needs even dimension, got {m}")));
    }
    let mut p = RatMatrix::zeros(m, m);
    for i in (0..m).step_by(2) {
        p[(i, i + 1)] = Rational::one();
        p[(i + 1, i)] = -Rational::one();
    }
    Ok(p)
}

/// Logarithm `N_i` of the local monodromy around the `i`-th branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlOperator {
    pub index: usize,
    pub matrix: RatMatrix,
}

impl PlOperator {
    fn with_index(mut self, index: usize) -> Self {
        self.index = index;
        self
    }
}

/// `x ↦ sign · ⟨x, v⟩ · v`, i.e. the matrix `sign · v (P v)ᵀ`.
pub fn pl_operator(pairing: &RatMatrix, cycle: &[Rational], sign: PlSign) -> Result<PlOperator> {
    let m = pairing.rows();
    if !pairing.is_square() || cycle.len() != m {
        return Err(Error::Dimension(format!(
            "cycle of length {} against a {}x{} pairing",
            cycle.len(),
            pairing.rows(),
            pairing.cols()
        )));
    }
    // ⟨x, v⟩ = Σ_a x_a (P v)_a
    let pv = pairing.mul_vec(cycle)?;
    let s = sign.as_rational();
    let mut n = RatMatrix::zeros(m, m);
    for (i, vi) in cycle.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let c = &s * vi;
        for (j, w) in pv.iter().enumerate() {
            if !w.is_zero() {
                n[(i, j)] = &c * w;
            }
        }
    }
    Ok(PlOperator { index: 0, matrix: n })
}

/// The monodromy `T = I + N`.
pub fn transvection(op: &PlOperator) -> Result<RatMatrix> {
    let n = &op.matrix;
    if !n.matmul(n)?.is_zero() {
        return Err(Error::Input(format!(
            "operator {} is not square-zero, so I + N is not its exponential",
            op.index
        )));
    }
    RatMatrix::identity(n.rows()).add(n)
}

/// Outcome of a single invariant check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// Converts the first failed check into a precondition error.
    pub fn into_result(self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(match &c.detail {
                Some(d) => Error::Precondition(format!("{}: {d}", c.name)),
                None => Error::Precondition(c.name.to_string()),
            }),
        }
    }
}

pub const CHECK_SHAPES: &str = "shapes consistent";
pub const CHECK_SKEW: &str = "pairing skew";
pub const CHECK_NONDEGENERATE: &str = "pairing nondegenerate";
pub const CHECK_NONZERO: &str = "nonzero vanishing cycles";
pub const CHECK_ORTHOGONAL: &str = "vanishing cycles orthogonal";
pub const CHECK_COMMUTING: &str = "monodromy logarithms commute";
pub const CHECK_FIBER_DIM: &str = "fiber dimension odd";

fn check(name: &'static str, failure: Option<String>) -> Check {
    Check {
        name,
        passed: failure.is_none(),
        detail: failure,
    }
}

/// Runs every invariant check on `data`. Never fails; inspect the result.
pub fn validate(data: &MonodromyData) -> Diagnostics {
    let mut checks = Vec::new();
    if let Err(e) = data.check_shapes() {
        checks.push(check(CHECK_SHAPES, Some(e.to_string())));
        return Diagnostics { checks };
    }
    checks.push(check(CHECK_SHAPES, None));

    let p = &data.pairing;
    let skew = p.add(&p.transpose()).map(|s| s.is_zero()).unwrap_or(false);
    checks.push(check(
        CHECK_SKEW,
        (!skew).then(|| "pairing not skew".to_string()),
    ));

    let rank = p.rank();
    checks.push(check(
        CHECK_NONDEGENERATE,
        (rank != data.dim).then(|| format!("pairing degenerate (rank {rank} < {})", data.dim)),
    ));

    let zero: Vec<usize> = data
        .cycles
        .iter()
        .enumerate()
        .filter(|(_, v)| v.iter().all(Rational::is_zero))
        .map(|(i, _)| i)
        .collect();
    checks.push(check(
        CHECK_NONZERO,
        (!zero.is_empty()).then(|| format!("zero vanishing cycle unsupported (cycles {zero:?})")),
    ));

    let mut bad_pairs = Vec::new();
    for i in 0..data.delta() {
        for j in i + 1..data.delta() {
            if !data.pair(&data.cycles[i], &data.cycles[j]).is_zero() {
                bad_pairs.push((i, j));
            }
        }
    }
    checks.push(check(
        CHECK_ORTHOGONAL,
        (!bad_pairs.is_empty())
            .then(|| format!("vanishing cycles not orthogonal (pairs {bad_pairs:?})")),
    ));

    let ops = data.operators(PlSign::default()).expect("shapes checked");
    let non_commuting = non_commuting_pairs(&ops);
    checks.push(check(
        CHECK_COMMUTING,
        (!non_commuting.is_empty())
            .then(|| format!("monodromy logarithms do not commute (pairs {non_commuting:?})")),
    ));

    if let Some(f) = data.fiber_dim {
        checks.push(check(
            CHECK_FIBER_DIM,
            (f % 2 == 0).then(|| format!("fiber dimension {f} is even")),
        ));
    }
    Diagnostics { checks }
}

fn non_commuting_pairs(ops: &[PlOperator]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let a = ops[i].matrix.matmul(&ops[j].matrix).expect("square");
            let b = ops[j].matrix.matmul(&ops[i].matrix).expect("square");
            if a != b {
                out.push((i, j));
            }
        }
    }
    out
}

/// One summand `N_{i_1} ⋯ N_{i_p} V` of a CKS term, with a basis of the
/// subspace stored as matrix columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub indices: Vec<usize>,
    pub basis: RatMatrix,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// The complex `B^•`. Only nonzero summands are stored; a tuple whose
/// subspace vanishes has no entry. `differentials[p]` maps `B^p → B^{p+1}`
/// in the concatenated summand bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CksComplex {
    pub ambient_dim: usize,
    pub terms: Vec<Vec<Summand>>,
    pub differentials: Vec<RatMatrix>,
}

impl CksComplex {
    /// Degrees `0..=δ`.
    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.terms.len().saturating_sub(1)
    }

    pub fn term_dim(&self, p: usize) -> usize {
        self.terms.get(p).map_or(0, |t| t.iter().map(Summand::dim).sum())
    }

    pub fn term_dims(&self) -> Vec<usize> {
        self.degrees().map(|p| self.term_dim(p)).collect()
    }

    /// Checks `d^{p+1} ∘ d^p = 0` for every `p`.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| {
            w[1].matmul(&w[0]).map(|c| c.is_zero()).unwrap_or(false)
        })
    }
}

/// Assembles `B^•` from the vanishing cycles. Summand tuples are enumerated in
/// lexicographic order; a tuple is only extended when its subspace is nonzero,
/// since commuting operators make every superset of a vanishing tuple vanish.
pub fn build_cks(data: &MonodromyData, sign: PlSign) -> Result<CksComplex> {
    data.check_shapes()?;
    let ops = data.operators(sign)?;
    let bad = non_commuting_pairs(&ops);
    if !bad.is_empty() {
        return Err(Error::Precondition(format!(
            "monodromy logarithms do not commute (pairs {bad:?})"
        )));
    }
    let delta = ops.len();
    let m = data.dim;

    let mut terms: Vec<Vec<Summand>> = Vec::with_capacity(delta + 1);
    terms.push(vec![Summand {
        indices: Vec::new(),
        basis: RatMatrix::identity(m),
    }]);
    for p in 0..delta {
        let mut next = Vec::new();
        for s in &terms[p] {
            let start = s.indices.last().map_or(0, |&i| i + 1);
            for (j, op) in ops.iter().enumerate().skip(start) {
                let image = op.matrix.matmul(&s.basis)?;
                let basis = image.column_space_basis();
                if basis.cols() > 0 {
                    let mut indices = s.indices.clone();
                    indices.push(j);
                    next.push(Summand { indices, basis });
                }
            }
        }
        terms.push(next);
    }

    let mut differentials = Vec::with_capacity(delta);
    for p in 0..delta {
        differentials.push(assemble_differential(&terms[p], &terms[p + 1], &ops, m)?);
    }
    Ok(CksComplex {
        ambient_dim: m,
        terms,
        differentials,
    })
}

fn offsets(summands: &[Summand]) -> Vec<usize> {
    summands
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.dim();
            Some(o)
        })
        .collect()
}

fn assemble_differential(
    source: &[Summand],
    target: &[Summand],
    ops: &[PlOperator],
    m: usize,
) -> Result<RatMatrix> {
    let src_off = offsets(source);
    let tgt_off = offsets(target);
    let rows: usize = target.iter().map(Summand::dim).sum();
    let cols: usize = source.iter().map(Summand::dim).sum();
    let mut d = RatMatrix::zeros(rows, cols);
    for (t, tgt) in target.iter().enumerate() {
        for (l, &idx) in tgt.indices.iter().enumerate() {
            let mut face = tgt.indices.clone();
            face.remove(l);
            let Some(s) = source.iter().position(|s| s.indices == face) else {
                // the face subspace is zero, so its contribution is zero
                continue;
            };
            let src = &source[s];
            let image = ops[idx].matrix.matmul(&src.basis)?;
            let mut block = tgt.basis.solve_in_basis(&image).map_err(|_| {
                Error::Precondition(format!(
                    "N_{idx} does not map summand {face:?} into summand {:?} (ambient dim {m})",
                    tgt.indices
                ))
            })?;
            if l % 2 == 1 {
                block = block.scale(&-Rational::one());
            }
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    d[(tgt_off[t] + i, src_off[s] + j)] = block[(i, j)].clone();
                }
            }
        }
    }
    Ok(d)
}

/// `dim ker d^p − rank d^{p−1}` for every degree.
pub fn complex_cohomology(c: &CksComplex) -> Vec<usize> {
    let ranks: Vec<usize> = c.differentials.iter().map(RatMatrix::rank).collect();
    c.degrees()
        .map(|p| {
            let out = ranks.get(p).copied().unwrap_or(0);
            let inc = if p == 0 { 0 } else { ranks.get(p - 1).copied().unwrap_or(0) };
            c.term_dim(p) - out - inc
        })
        .collect()
}

/// Rank of `V → Q^δ`, `x ↦ (⟨x, v_i⟩)_i`.
pub fn excision_rank(data: &MonodromyData) -> Result<usize> {
    validate(data).into_result()?;
    Ok(excision_matrix(data)?.rank())
}

fn excision_matrix(data: &MonodromyData) -> Result<RatMatrix> {
    // row i is (P v_i)ᵀ up to sign: ⟨x, v_i⟩ = Σ_a x_a (P v_i)_a
    let rows = data
        .cycles
        .iter()
        .map(|v| data.pairing.mul_vec(v))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(RatMatrix::zeros(0, data.dim));
    }
    RatMatrix::from_rows(&rows)
}

/// Two-step filtration on the top cohomology of the singular section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationPair {
    pub level0: u64,
    pub level1: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcStalkReport {
    pub dim: usize,
    pub delta: usize,
    pub h_ambient: u64,
    pub h0: u64,
    pub h1: u64,
    /// Stalk cohomology in degrees `2..=δ`.
    pub higher: Vec<u64>,
    pub span_dim: u64,
    pub excision_rank: u64,
    pub h_top_singular: u64,
    pub defect: u64,
    pub filtration: FiltrationPair,
}

impl fmt::Display for IcStalkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let higher = if self.higher.is_empty() {
            "-".to_string()
        } else {
            self.higher
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        let rows: [(&str, String); 11] = [
            ("dim V", self.dim.to_string()),
            ("nodes", self.delta.to_string()),
            ("h_ambient", self.h_ambient.to_string()),
            ("span dim", self.span_dim.to_string()),
            ("excision rank", self.excision_rank.to_string()),
            ("IC h^0", self.h0.to_string()),
            ("IC h^1", self.h1.to_string()),
            ("IC h^i, i >= 2", higher),
            ("h^top(singular)", self.h_top_singular.to_string()),
            ("defect", self.defect.to_string()),
            (
                "filtration gr0/gr1",
                format!("{} / {}", self.filtration.level0, self.filtration.level1),
            ),
        ];
        for (k, v) in rows {
            writeln!(f, "{k:<20} {v}")?;
        }
        Ok(())
    }
}

/// Stalk cohomology of the intersection cohomology complex at the nodal point.
///
/// Computed twice: from the closed form `h^0 = m − s`, `h^1 = δ − s` with
/// `s = dim span{v_i}`, and as the cohomology of the assembled CKS complex. A
/// disagreement is reported as an error.
pub fn ic_stalk(data: &MonodromyData) -> Result<IcStalkReport> {
    ic_stalk_with_sign(data, PlSign::default())
}

pub fn ic_stalk_with_sign(data: &MonodromyData, sign: PlSign) -> Result<IcStalkReport> {
    validate(data).into_result()?;
    let m = data.dim;
    let delta = data.delta();
    let s = span_dim(m, &data.cycles)?;

    let complex = build_cks(data, sign)?;
    let cohomology = complex_cohomology(&complex);
    let closed = (m - s, delta - s);
    let from_complex = (cohomology[0], cohomology.get(1).copied().unwrap_or(0));
    if closed != from_complex {
        return Err(Error::Precondition(format!(
            "closed form (h0, h1) = {closed:?} disagrees with CKS cohomology {from_complex:?}"
        )));
    }
    let higher: Vec<u64> = cohomology.iter().skip(2).map(|&x| x as u64).collect();

    let exc = excision_matrix(data)?.rank();
    let h1 = (delta - s) as u64;
    let h_top = data.h_ambient + delta as u64 - exc as u64;
    if h_top != data.h_ambient + h1 {
        return Err(Error::Precondition(format!(
            "excision count {h_top} disagrees with h_ambient + h1 = {}",
            data.h_ambient + h1
        )));
    }

    Ok(IcStalkReport {
        dim: m,
        delta,
        h_ambient: data.h_ambient,
        h0: (m - s) as u64,
        h1,
        higher,
        span_dim: s as u64,
        excision_rank: exc as u64,
        h_top_singular: h_top,
        defect: h1,
        filtration: FiltrationPair {
            level0: h1,
            level1: data.h_ambient,
        },
    })
}

/// Graded pieces of the perverse filtration on `H^top` of the singular section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerverseFiltration {
    /// The piece in perversity `≤ −1`, always zero.
    pub below: u64,
    pub level0: u64,
    pub level1: u64,
    pub total: u64,
}

pub fn perverse_filtration(report: &IcStalkReport) -> PerverseFiltration {
    PerverseFiltration {
        below: 0,
        level0: report.h1,
        level1: report.h_ambient,
        total: report.h1 + report.h_ambient,
    }
}
