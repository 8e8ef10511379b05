//! Finite point sets in projective space and the conditions they impose on
//! forms of a given degree.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bott::binomial;
use crate::error::{Error, Result};
use crate::linalg::{RatMatrix, Rational};

/// Distinct points of `P^n` with rational homogeneous coordinates, each
/// normalized so its first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectivePointSet {
    ambient_dim: usize,
    points: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct PointSetDoc {
    ambient_dim: usize,
    points: Vec<Vec<Rational>>,
}

impl<'de> Deserialize<'de> for ProjectivePointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PointSetDoc::deserialize(d)?;
        ProjectivePointSet::new(doc.ambient_dim, doc.points).map_err(serde::de::Error::custom)
    }
}

fn normalize(p: &[Rational]) -> Option<Vec<Rational>> {
    let lead = p.iter().find(|x| !x.is_zero())?.recip();
    Some(p.iter().map(|x| x * &lead).collect())
}

impl ProjectivePointSet {
    /// Rejects zero vectors, wrong coordinate counts and repeated projective
    /// points.
    pub fn new(ambient_dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != ambient_dim + 1 {
                return Err(Error::Input(format!(
                    "point {i} has {} coordinates, expected {}",
                    p.len(),
                    ambient_dim + 1
                )));
            }
            let q = normalize(p)
                .ok_or_else(|| Error::Input(format!("point {i} is the zero vector")))?;
            if !seen.insert(q.clone()) {
                return Err(Error::Input(format!(
                    "point {i} repeats an earlier point projectively"
                )));
            }
            normalized.push(q);
        }
        Ok(ProjectivePointSet {
            ambient_dim,
            points: normalized,
        })
    }

    pub fn from_i64(ambient_dim: usize, points: &[&[i64]]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&x| Rational::from(x)).collect())
            .collect();
        ProjectivePointSet::new(ambient_dim, pts)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PointSetDoc = serde_json::from_str(text)?;
        ProjectivePointSet::new(doc.ambient_dim, doc.points)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `δ × (n+1)` matrix of normalized coordinates.
    pub fn coordinate_matrix(&self) -> RatMatrix {
        RatMatrix::from_vec(
            self.len(),
            self.ambient_dim + 1,
            self.points.iter().flatten().cloned().collect(),
        )
        .expect("coordinate counts checked on construction")
    }
}

/// Exponent vectors of the degree-`d` monomials in `n + 1` variables,
/// lexicographically descending (`x_0^d` first).
pub fn monomial_basis(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn extend(vars_left: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            extend(vars_left - 1, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(n + 1, d, &mut Vec::with_capacity(n + 1), &mut out);
    out
}

/// Matrix of the restriction `H^0(O(d)) → O_Δ(d)`: one row per point, one
/// column per monomial.
pub fn evaluation_matrix(pts: &ProjectivePointSet, d: u32) -> RatMatrix {
    let monomials = monomial_basis(pts.ambient_dim, d);
    let mut m = RatMatrix::zeros(pts.len(), monomials.len());
    for (i, p) in pts.points.iter().enumerate() {
        // powers[v][e] = p_v^e
        let powers: Vec<Vec<Rational>> = p
            .iter()
            .map(|x| {
                std::iter::successors(Some(Rational::one()), |acc| Some(acc * x))
                    .take(d as usize + 1)
                    .collect()
            })
            .collect();
        for (j, mono) in monomials.iter().enumerate() {
            m[(i, j)] = mono
                .iter()
                .enumerate()
                .fold(Rational::one(), |acc, (v, &e)| acc * &powers[v][e as usize]);
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub ambient_dim: usize,
    pub delta: u64,
    pub degree: u32,
    /// `h^0(O(d)) = C(n + d, n)`.
    pub h0_ambient: u64,
    pub rank: u64,
    pub h0_ideal: u64,
    pub h1_ideal: u64,
    pub independent: bool,
}

impl fmt::Display for ConditionsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("ambient dim", self.ambient_dim.to_string()),
            ("points", self.delta.to_string()),
            ("degree", self.degree.to_string()),
            ("h^0(O(d))", self.h0_ambient.to_string()),
            ("evaluation rank", self.rank.to_string()),
            ("h^0(I(d))", self.h0_ideal.to_string()),
            ("h^1(I(d))", self.h1_ideal.to_string()),
            ("independent", self.independent.to_string()),
        ];
        for (k, v) in rows {
            writeln!(f, "{k:<20} {v}")?;
        }
        Ok(())
    }
}

pub fn conditions_report(pts: &ProjectivePointSet, d: u32) -> Result<ConditionsReport> {
    let n = pts.ambient_dim as u64;
    let h0_ambient = binomial(n + d as u64, n)?;
    let rank = evaluation_matrix(pts, d).rank() as u64;
    let delta = pts.len() as u64;
    Ok(ConditionsReport {
        ambient_dim: pts.ambient_dim,
        delta,
        degree: d,
        h0_ambient,
        rank,
        h0_ideal: h0_ambient - rank,
        h1_ideal: delta - rank,
        independent: rank == delta,
    })
}

/// Projective dimension of the linear span of the points (`-1` when empty).
pub fn node_span_dim(pts: &ProjectivePointSet) -> i64 {
    pts.coordinate_matrix().rank() as i64 - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalCrossingCheck {
    pub independent_branches: bool,
    /// Projective dimension of the intersection of the hyperplanes dual to the
    /// points.
    pub tangent_intersection_dim: i64,
}

/// Points of the dual space `P^N` read as the tangent hyperplanes of the
/// branches of the discriminant. The branches cross normally exactly when the
/// points are linearly independent.
pub fn normal_crossing_check(pts: &ProjectivePointSet) -> NormalCrossingCheck {
    let rank = pts.coordinate_matrix().rank();
    NormalCrossingCheck {
        independent_branches: rank == pts.len(),
        tangent_intersection_dim: pts.ambient_dim as i64 - rank as i64,
    }
}

/// Expected dimension `N − r` of the locus of sections with `r` nodes.
pub fn severi_expected_dim(big_n: u64, r: u64) -> Result<u64> {
    big_n.checked_sub(r).ok_or_else(|| {
        Error::Input(format!("node count {r} exceeds the dual space dimension {big_n}"))
    })
}

/// The `(k−1)^n` points `(c_{0,j_0} : … : c_{n−1,j_{n−1}} : 1)`: the common
/// zeros of `f_i = ∏_j (x_i − c_{i,j} x_n)`, a complete intersection of type
/// `(k−1, …, k−1)`. Defaults to `c_{i,j} = j` for `j = 1..k−1`.
pub fn grid_nodes(
    n: usize,
    k: u32,
    parameters: Option<&[Vec<Rational>]>,
) -> Result<ProjectivePointSet> {
    if k < 2 {
        return Err(Error::Input(format!("grid needs k >= 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::Input("grid needs ambient dimension n >= 1".into()));
    }
    let per_axis = (k - 1) as usize;
    let params: Vec<Vec<Rational>> = match parameters {
        Some(p) => {
            if p.len() != n {
                return Err(Error::Input(format!(
                    "expected {n} parameter lists, got {}",
                    p.len()
                )));
            }
            for (i, list) in p.iter().enumerate() {
                if list.len() != per_axis {
                    return Err(Error::Input(format!(
                        "parameter list {i} has {} entries, expected {per_axis}",
                        list.len()
                    )));
                }
                let distinct: HashSet<&Rational> = list.iter().collect();
                if distinct.len() != list.len() {
                    return Err(Error::Input(format!(
                        "parameter list {i} has repeated entries"
                    )));
                }
            }
            p.to_vec()
        }
        None => {
            let axis: Vec<Rational> = (1..=per_axis as i64).map(Rational::from).collect();
            vec![axis; n]
        }
    };

    let total = per_axis.checked_pow(n as u32).ok_or_else(|| {
        Error::Input(format!("grid with (k-1)^n = {per_axis}^{n} points is too large"))
    })?;
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        let mut p: Vec<Rational> = idx.iter().enumerate().map(|(i, &j)| params[i][j].clone()).collect();
        p.push(Rational::one());
        points.push(p);
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < per_axis {
                break;
            }
            *slot = 0;
        }
    }
    ProjectivePointSet::new(n, points)
}

/// `(k − 1)^n`.
pub fn node_count_ci(n: u32, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::Input(format!("k must be at least 2, got {k}")));
    }
    (k - 1)
        .checked_pow(n)
        .ok_or_else(|| Error::Input("node count overflows".into()))
}

/// `C(n + h, n)` nodes of the degeneracy locus of a general
/// `O^{h+1} → O(1)^{h+n}` on `P^n`.
pub fn node_count_quadrics(n: u64, num_quadrics: u64) -> Result<u64> {
    if num_quadrics == 0 {
        return Err(Error::Input("need at least one quadric".into()));
    }
    binomial(n + num_quadrics, n)
}

/// `h^1(I_Δ(d))` for each listed degree.
pub fn h1_profile(pts: &ProjectivePointSet, degrees: &[u32]) -> Result<Vec<(u32, u64)>> {
    degrees
        .iter()
        .map(|&d| conditions_report(pts, d).map(|r| (d, r.h1_ideal)))
        .collect()
}

/// Whether `h^1` is non-increasing along the profile. Reported, never
/// enforced.
pub fn is_non_increasing(profile: &[(u32, u64)]) -> bool {
    profile.windows(2).all(|w| w[1].1 <= w[0].1)
}
