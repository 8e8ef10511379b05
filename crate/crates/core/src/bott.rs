//! Cohomology of sums of line bundles on `P^n` and the `h^1` vanishing chase
//! along a resolution of an ideal sheaf.
//!
//! Given a resolution `0 → C_L → … → C_1 → F → 0`, splitting it into short
//! exact sequences gives `h^1(F) ≤ Σ_p h^p(C_p)`. When every intermediate
//! term satisfies `h^j(C_j) = h^{j+1}(C_j) = 0` the inequality is an equality
//! and `h^1(F) = h^L(C_L)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rational;

/// `C(n, k)` with overflow reported as an error.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) is divisible by i at every step
        acc = acc
            .checked_mul(n as u128 - k as u128 + i)
            .ok_or_else(overflow)?
            / i;
    }
    u64::try_from(acc).map_err(|_| overflow())
}

fn overflow() -> Error {
    Error::Input("binomial coefficient overflows 64 bits".into())
}

/// `h^q(P^n, O(a))` by Bott's formula.
pub fn bott_h(n: u64, q: u64, a: i64) -> Result<u64> {
    if q > n {
        return Err(Error::Input(format!(
            "cohomological degree {q} out of range for P^{n}"
        )));
    }
    let n_i = n as i64;
    if q == 0 {
        if a >= 0 {
            return binomial(n + a as u64, n);
        }
        return Ok(0);
    }
    if q == n {
        // Serre duality: h^n(O(a)) = h^0(O(-a-n-1))
        if a < -n_i {
            return binomial((-a - 1) as u64, n);
        }
        return Ok(0);
    }
    Ok(0)
}

/// `⊕ O(a)^r`, kept sorted by decreasing twist with equal twists merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LineBundleSum {
    summands: Vec<(i64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct SummandDoc {
    twist: i64,
    mult: u64,
}

impl Serialize for LineBundleSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<SummandDoc> = self
            .summands
            .iter()
            .map(|&(twist, mult)| SummandDoc { twist, mult })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LineBundleSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<SummandDoc>::deserialize(d)?;
        LineBundleSum::new(docs.into_iter().map(|s| (s.twist, s.mult)))
            .map_err(serde::de::Error::custom)
    }
}

impl LineBundleSum {
    pub fn new(summands: impl IntoIterator<Item = (i64, u64)>) -> Result<Self> {
        let mut merged: Vec<(i64, u64)> = Vec::new();
        let mut all: Vec<(i64, u64)> = summands.into_iter().collect();
        if let Some(&(t, _)) = all.iter().find(|s| s.1 == 0) {
            return Err(Error::Input(format!("summand O({t}) has multiplicity 0")));
        }
        all.sort_by_key(|s| std::cmp::Reverse(s.0));
        for (t, r) in all {
            match merged.last_mut() {
                Some(last) if last.0 == t => {
                    last.1 = last.1.checked_add(r).ok_or_else(overflow)?;
                }
                _ => merged.push((t, r)),
            }
        }
        Ok(LineBundleSum { summands: merged })
    }

    pub fn single(twist: i64, mult: u64) -> Self {
        LineBundleSum::new([(twist, mult)]).expect("positive multiplicity")
    }

    pub fn summands(&self) -> &[(i64, u64)] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|s| s.1).sum()
    }

    /// `h^q(P^n, ·)` of the whole sum.
    pub fn h(&self, n: u64, q: u64) -> Result<u64> {
        self.summands.iter().try_fold(0u64, |acc, &(a, r)| {
            let v = bott_h(n, q, a)?.checked_mul(r).ok_or_else(overflow)?;
            acc.checked_add(v).ok_or_else(overflow)
        })
    }
}

impl fmt::Display for LineBundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|&(t, r)| {
                if r == 1 {
                    format!("O({t})")
                } else {
                    format!("O({t})^{r}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Shifts every twist by `t`.
pub fn twist_term(s: &LineBundleSum, t: i64) -> LineBundleSum {
    LineBundleSum {
        summands: s.summands.iter().map(|&(a, r)| (a + t, r)).collect(),
    }
}

/// A resolution `0 → C_L → … → C_1 → I(t0) → 0` of a twisted ideal sheaf on
/// `P^n`. `terms[0]` is `C_1`, the term adjacent to the sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub ambient_dim: u64,
    pub resolved_twist: i64,
    pub terms: Vec<LineBundleSum>,
}

#[derive(Deserialize)]
struct ResolutionDoc {
    ambient_dim: u64,
    resolved_twist: i64,
    terms: Vec<LineBundleSum>,
}

impl<'de> Deserialize<'de> for Resolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ResolutionDoc::deserialize(d)?;
        Resolution::new(doc.ambient_dim, doc.resolved_twist, doc.terms)
            .map_err(serde::de::Error::custom)
    }
}

impl Resolution {
    pub fn new(ambient_dim: u64, resolved_twist: i64, terms: Vec<LineBundleSum>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Input("resolution has no terms".into()));
        }
        if let Some(p) = terms.iter().position(LineBundleSum::is_empty) {
            return Err(Error::Input(format!("resolution term C_{} is empty", p + 1)));
        }
        Ok(Resolution {
            ambient_dim,
            resolved_twist,
            terms,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ResolutionDoc = serde_json::from_str(text)?;
        Resolution::new(doc.ambient_dim, doc.resolved_twist, doc.terms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `C_p`, 1-based.
    pub fn term(&self, p: usize) -> &LineBundleSum {
        &self.terms[p - 1]
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")?;
        for t in self.terms.iter().rev() {
            write!(f, " -> {t}")?;
        }
        write!(f, " -> I({}) -> 0  on P^{}", self.resolved_twist, self.ambient_dim)
    }
}

/// Koszul resolution of the complete intersection cut out by forms of the
/// given degrees: `C_p = ∧^p E*` with `E = ⊕ O(d_i)`.
pub fn koszul_resolution(n: u64, degrees: &[u64]) -> Result<Resolution> {
    let c = degrees.len();
    if c == 0 {
        return Err(Error::Input("Koszul resolution needs at least one form".into()));
    }
    if c as u64 > n {
        return Err(Error::Input(format!(
            "{c} forms in P^{n} cannot cut out a complete intersection"
        )));
    }
    if c > 24 {
        return Err(Error::Input(format!("{c} forms give too many Koszul summands")));
    }
    if let Some(d) = degrees.iter().find(|&&d| d == 0) {
        return Err(Error::Input(format!("form degree must be positive, got {d}")));
    }
    let mut terms = vec![Vec::new(); c];
    // each nonempty subset S contributes O(-Σ_S d_i) to C_|S|
    for mask in 1u64..(1u64 << c) {
        let size = mask.count_ones() as usize;
        let twist: i64 = degrees
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &d)| -(d as i64))
            .sum();
        terms[size - 1].push((twist, 1));
    }
    let terms = terms
        .into_iter()
        .map(LineBundleSum::new)
        .collect::<Result<Vec<_>>>()?;
    Resolution::new(n, 0, terms)
}

/// Eagon-Northcott resolution of `I_Δ(h+n)` for the degeneracy locus of a
/// general `O^{h+1} → O(1)^{h+n}` on `P^n`:
/// `C_p = S^{p−1} O^{h+1} ⊗ ∧^{n−p} O(1)^{h+n}`.
pub fn eagon_northcott_resolution(n: u64, num_quadrics: u64) -> Result<Resolution> {
    if n == 0 {
        return Err(Error::Input("ambient dimension must be at least 1".into()));
    }
    if num_quadrics == 0 {
        return Err(Error::Input("need at least one quadric".into()));
    }
    let h = num_quadrics;
    let terms = (1..=n)
        .map(|p| {
            let exterior = binomial(h + n, n - p)?;
            let symmetric = binomial(h + p - 1, p - 1)?;
            let mult = exterior.checked_mul(symmetric).ok_or_else(overflow)?;
            LineBundleSum::new([((n - p) as i64, mult)])
        })
        .collect::<Result<Vec<_>>>()?;
    Resolution::new(n, (h + n) as i64, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    /// Homological position `p` of the term `C_p`.
    pub position: u64,
    /// Twist of the summand after shifting to the target.
    pub twist: i64,
    /// `h^p` of that summand, multiplicity included.
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaseVerdict {
    pub target_twist: i64,
    pub upper_bound: u64,
    pub vanishes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_h1: Option<u64>,
    pub obstructions: Vec<Obstruction>,
}

impl fmt::Display for ChaseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target twist: {}", self.target_twist)?;
        writeln!(f, "upper bound:  {}", self.upper_bound)?;
        writeln!(f, "vanishes: {}", self.vanishes)?;
        match self.exact_h1 {
            Some(e) => writeln!(f, "exact h^1:    {e}")?,
            None => writeln!(f, "exact h^1:    undetermined")?,
        }
        for o in &self.obstructions {
            writeln!(
                f,
                "obstruction:  h^{p}(O({t})) contributes {v} at C_{p}",
                p = o.position,
                t = o.twist,
                v = o.value
            )?;
        }
        Ok(())
    }
}

fn h_or_zero(s: &LineBundleSum, n: u64, q: u64) -> Result<u64> {
    if q > n {
        Ok(0)
    } else {
        s.h(n, q)
    }
}

/// Bounds `h^1(I(t))` for the sheaf resolved by `res`.
pub fn h1_vanishing_chase(res: &Resolution, target_twist: i64) -> Result<ChaseVerdict> {
    let n = res.ambient_dim;
    let shift = target_twist - res.resolved_twist;
    let shifted: Vec<LineBundleSum> = res.terms.iter().map(|t| twist_term(t, shift)).collect();

    let mut obstructions = Vec::new();
    let mut upper_bound = 0u64;
    for (i, term) in shifted.iter().enumerate() {
        let p = i as u64 + 1;
        if p > n {
            continue;
        }
        for &(a, r) in term.summands() {
            let value = bott_h(n, p, a)?.checked_mul(r).ok_or_else(overflow)?;
            if value > 0 {
                upper_bound = upper_bound.checked_add(value).ok_or_else(overflow)?;
                obstructions.push(Obstruction {
                    position: p,
                    twist: a,
                    value,
                });
            }
        }
    }

    let len = shifted.len();
    let mut splice_exact = true;
    for (i, term) in shifted.iter().enumerate().take(len - 1) {
        let j = i as u64 + 1;
        if h_or_zero(term, n, j)? != 0 || h_or_zero(term, n, j + 1)? != 0 {
            splice_exact = false;
            break;
        }
    }
    let exact_h1 = if splice_exact {
        Some(h_or_zero(&shifted[len - 1], n, len as u64)?)
    } else if upper_bound == 0 {
        Some(0)
    } else {
        None
    };

    Ok(ChaseVerdict {
        target_twist,
        upper_bound,
        vanishes: upper_bound == 0,
        exact_h1,
        obstructions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiThreshold {
    pub n: u64,
    /// `(2n + 1) / (n − 1)`.
    pub bound: Rational,
    /// Integers `k ≥ 2` strictly below the bound.
    pub admissible_k: Vec<u64>,
}

/// Degrees `k` for which the Koszul chase proves that the `(k−1)^n` nodes of
/// a degree-`k` hypersurface containing a `P^n` impose independent conditions
/// on `|O(k)|`.
pub fn ci_threshold(n: u64) -> Result<CiThreshold> {
    if n < 2 {
        return Err(Error::Input(format!("threshold undefined for n = {n}")));
    }
    let num = 2 * n + 1;
    let den = n - 1;
    let bound = Rational::new(num, den)?;
    // k < num/den  ⇔  k·den < num
    let admissible_k = (2..).take_while(|k| k * den < num).collect();
    Ok(CiThreshold {
        n,
        bound,
        admissible_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(4, 0).unwrap(), 1);
        assert_eq!(binomial(2, 3).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118264581564861424);
        assert!(binomial(200, 100).is_err());
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_h(2, 0, 1).unwrap(), 3);
        assert_eq!(bott_h(2, 2, -3).unwrap(), 1);
        assert_eq!(bott_h(2, 2, 2 * (1 - 5) + 5).unwrap(), 1);
        assert_eq!(bott_h(2, 2, 2 * (1 - 4) + 4).unwrap(), 0);
        assert_eq!(bott_h(3, 1, -10).unwrap(), 0);
        assert!(bott_h(2, 3, 0).is_err());
    }

    #[test]
    fn line_bundle_sum_canonical() {
        let s = LineBundleSum::new([(-3, 1), (1, 2), (-3, 4)]).unwrap();
        assert_eq!(s.summands(), &[(1, 2), (-3, 5)]);
        assert_eq!(s.to_string(), "O(1)^2 + O(-3)^5");
        assert!(LineBundleSum::new([(0, 0)]).is_err());
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist_term(&LineBundleSum::single(-6, 1), 4), LineBundleSum::single(-2, 1));
        let s = LineBundleSum::new([(1, 2), (0, 1)]).unwrap();
        assert_eq!(twist_term(&s, 0), s);
        assert_eq!(
            twist_term(&s, -3),
            LineBundleSum::new([(-2, 2), (-3, 1)]).unwrap()
        );
    }

    #[test]
    fn koszul_examples() {
        let r = koszul_resolution(2, &[3, 3]).unwrap();
        assert_eq!(r.terms, vec![LineBundleSum::single(-3, 2), LineBundleSum::single(-6, 1)]);
        assert_eq!(r.resolved_twist, 0);

        let r = koszul_resolution(1, &[5]).unwrap();
        assert_eq!(r.terms, vec![LineBundleSum::single(-5, 1)]);

        let r = koszul_resolution(3, &[2, 2, 2]).unwrap();
        assert_eq!(
            r.terms,
            vec![
                LineBundleSum::single(-2, 3),
                LineBundleSum::single(-4, 3),
                LineBundleSum::single(-6, 1)
            ]
        );
        assert!(koszul_resolution(2, &[1, 1, 1]).is_err());
    }

    #[test]
    fn koszul_mixed_degrees() {
        let r = koszul_resolution(3, &[1, 2, 3]).unwrap();
        assert_eq!(r.term(1), &LineBundleSum::new([(-1, 1), (-2, 1), (-3, 1)]).unwrap());
        assert_eq!(r.term(2), &LineBundleSum::new([(-3, 1), (-4, 1), (-5, 1)]).unwrap());
        assert_eq!(r.term(3), &LineBundleSum::single(-6, 1));
    }

    #[test]
    fn eagon_northcott_examples() {
        let r = eagon_northcott_resolution(2, 1).unwrap();
        assert_eq!(r.terms, vec![LineBundleSum::single(1, 3), LineBundleSum::single(0, 2)]);
        assert_eq!(r.resolved_twist, 3);

        for h in 1..6 {
            let r = eagon_northcott_resolution(1, h).unwrap();
            assert_eq!(r.terms, vec![LineBundleSum::single(0, 1)]);
        }

        let r = eagon_northcott_resolution(3, 2).unwrap();
        assert_eq!(r.term(3), &LineBundleSum::single(0, 6));
    }

    #[test]
    fn chase_koszul_vanishing() {
        let v = h1_vanishing_chase(&koszul_resolution(2, &[3, 3]).unwrap(), 4).unwrap();
        assert!(v.vanishes);
        assert!(v.obstructions.is_empty());
        assert_eq!(v.exact_h1, Some(0));
    }

    #[test]
    fn chase_koszul_obstructed() {
        let v = h1_vanishing_chase(&koszul_resolution(2, &[4, 4]).unwrap(), 5).unwrap();
        assert!(!v.vanishes);
        assert_eq!(
            v.obstructions,
            vec![Obstruction {
                position: 2,
                twist: -3,
                value: 1
            }]
        );
        assert_eq!(v.exact_h1, Some(1));
        assert_eq!(v.upper_bound, 1);
    }

    #[test]
    fn chase_without_exact_value() {
        // n = 3, k = 6: C_2 = O(-4)^3 has h^3 ≠ 0, so the splice is not exact
        let v = h1_vanishing_chase(&koszul_resolution(3, &[5, 5, 5]).unwrap(), 6).unwrap();
        assert!(!v.vanishes);
        assert_eq!(v.exact_h1, None);
    }

    #[test]
    fn chase_eagon_northcott() {
        for n in 2..=5 {
            for h in 1..=6 {
                let v = h1_vanishing_chase(&eagon_northcott_resolution(n, h).unwrap(), 2).unwrap();
                assert_eq!(v.vanishes, h <= 2, "n={n} h={h}");
            }
        }
        // h = 3: C_2 = O(0)^4 shifts to O(-3)^4, each with h^2 = h^0(O(0)) = 1
        let v = h1_vanishing_chase(&eagon_northcott_resolution(2, 3).unwrap(), 2).unwrap();
        assert_eq!(v.obstructions, vec![Obstruction { position: 2, twist: -3, value: 4 }]);
    }

    #[test]
    fn thresholds() {
        let t = ci_threshold(2).unwrap();
        assert_eq!(t.bound, Rational::from(5));
        assert_eq!(t.admissible_k, vec![2, 3, 4]);
        let t = ci_threshold(3).unwrap();
        assert_eq!(t.bound, Rational::new(7, 2).unwrap());
        assert_eq!(t.admissible_k, vec![2, 3]);
        let t = ci_threshold(5).unwrap();
        assert_eq!(t.bound, Rational::new(11, 4).unwrap());
        assert_eq!(t.admissible_k, vec![2]);
        assert!(ci_threshold(1).is_err());
    }

    #[test]
    fn resolution_json() {
        let doc = r#"{"ambient_dim": 2, "resolved_twist": 0,
                      "terms": [[{"twist": -3, "mult": 2}], [{"twist": -6, "mult": 1}]]}"#;
        let r = Resolution::from_json(doc).unwrap();
        assert_eq!(r, koszul_resolution(2, &[3, 3]).unwrap());
        let back: Resolution = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(Resolution::from_json(r#"{"ambient_dim": 2, "resolved_twist": 0, "terms": []}"#).is_err());
    }
}
