mod common;

use common::{q, random_invertible, random_monodromy, random_points};
use nodal_ic::bott::{
    bott_h, eagon_northcott_resolution, h1_vanishing_chase, koszul_resolution, LineBundleSum,
};
use nodal_ic::monodromy::{
    build_cks, complex_cohomology, excision_rank, ic_stalk_with_sign, perverse_filtration,
    MonodromyData, PlSign,
};
use nodal_ic::points::{
    conditions_report, evaluation_matrix, grid_nodes, h1_profile, is_non_increasing,
    normal_crossing_check, ProjectivePointSet,
};
use nodal_ic::{RatMatrix, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec((-5i64..=5, 1i64..=3), r * c).prop_map(move |v| {
            let data = v
                .into_iter()
                .map(|(n, d)| Rational::new(n, d).unwrap())
                .collect();
            RatMatrix::from_vec(r, c, data).unwrap()
        })
    })
}

fn square(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, n * n)
        .prop_map(move |v| RatMatrix::from_vec(n, n, v.into_iter().map(q).collect()).unwrap())
}

fn monodromy() -> impl Strategy<Value = MonodromyData> {
    any::<u64>().prop_map(|seed| random_monodromy(&mut ChaCha8Rng::seed_from_u64(seed), 10, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in small_matrix(6, 7)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rref().rank + k.cols(), m.cols());
        prop_assert!(m.matmul(&k).unwrap().is_zero());
        prop_assert_eq!(m.rank(), m.rref().rank);
    }

    #[test]
    fn rref_idempotent(m in small_matrix(5, 6)) {
        let once = m.rref();
        let twice = once.matrix.rref();
        prop_assert_eq!(&once.matrix, &twice.matrix);
        prop_assert_eq!(once.pivots, twice.pivots);
    }

    #[test]
    fn rank_invariant_under_row_operations(m in small_matrix(5, 5), scale in 1i64..=7, swap in 0usize..5) {
        let mut rows = m.to_rows();
        let i = swap % rows.len();
        rows[i] = rows[i].iter().map(|x| x * &Rational::new(-scale, 3).unwrap()).collect();
        rows.rotate_left(i);
        let moved = RatMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(moved.rank(), m.rank());
    }

    #[test]
    fn column_space_basis_spans(m in small_matrix(5, 6)) {
        let b = m.column_space_basis();
        prop_assert_eq!(b.cols(), m.rank());
        prop_assert_eq!(b.rank(), b.cols());
        prop_assert_eq!(b.hstack(&m).unwrap().rank(), b.cols());
    }

    #[test]
    fn matmul_associative(a in square(3), b in square(3), c in square(3)) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(RatMatrix::identity(3).matmul(&a).unwrap(), a.clone());
        prop_assert!(a.matmul(&RatMatrix::zeros(3, 2)).unwrap().is_zero());
    }

    #[test]
    fn rational_string_roundtrip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r = Rational::new(n, d).unwrap();
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn operators_square_zero_and_annihilate_each_other(data in monodromy()) {
        let ops = data.operators(PlSign::Minus).unwrap();
        for a in &ops {
            prop_assert!(a.matrix.matmul(&a.matrix).unwrap().is_zero());
            prop_assert!(a.matrix.rank() <= 1);
            for b in &ops {
                if a.index != b.index {
                    prop_assert!(a.matrix.matmul(&b.matrix).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn cks_concentrated_in_degrees_zero_and_one(data in monodromy()) {
        let c = build_cks(&data, PlSign::Minus).unwrap();
        prop_assert!(c.is_complex());
        let h = complex_cohomology(&c);
        for (p, &hp) in h.iter().enumerate().skip(2) {
            prop_assert_eq!(c.term_dim(p), 0);
            prop_assert_eq!(hp, 0);
        }
    }

    #[test]
    fn closed_form_matches_complex(data in monodromy()) {
        let m = data.dim;
        let s = RatMatrix::from_columns(m, &data.cycles).unwrap().rref().rank;
        let h = complex_cohomology(&build_cks(&data, PlSign::Minus).unwrap());
        prop_assert_eq!(h[0], m - s);
        prop_assert_eq!(h.get(1).copied().unwrap_or(0), data.delta() - s);
        let r = ic_stalk_with_sign(&data, PlSign::Minus).unwrap();
        prop_assert_eq!(r.h_ambient + data.delta() as u64 - excision_rank(&data).unwrap() as u64,
                        r.h_ambient + r.h1);
        prop_assert_eq!(perverse_filtration(&r).total, r.h_top_singular);
    }

    #[test]
    fn sign_does_not_change_report(data in monodromy()) {
        prop_assert_eq!(
            ic_stalk_with_sign(&data, PlSign::Minus).unwrap(),
            ic_stalk_with_sign(&data, PlSign::Plus).unwrap()
        );
    }

    #[test]
    fn degree_zero_kernel_is_the_orthogonal_complement(data in monodromy()) {
        let c = build_cks(&data, PlSign::Minus).unwrap();
        if let Some(d0) = c.differentials.first() {
            let k = d0.kernel_basis();
            for j in 0..k.cols() {
                let x = k.column(j);
                for v in &data.cycles {
                    prop_assert!(data.pair(&x, v).is_zero());
                }
            }
        }
    }

    #[test]
    fn evaluation_rank_invariances(seed in any::<u64>(), d in 1u32..=3, lambda in 1i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, 2, 5);
        let base = evaluation_matrix(&pts, d).rank();

        let mut reversed: Vec<Vec<Rational>> = pts.points().to_vec();
        reversed.reverse();
        if let Some(first) = reversed.first_mut() {
            *first = first.iter().map(|x| x * &Rational::new(-lambda, 2).unwrap()).collect();
        }
        let moved = ProjectivePointSet::new(2, reversed).unwrap();
        prop_assert_eq!(evaluation_matrix(&moved, d).rank(), base);

        let g = random_invertible(&mut rng, 3);
        let transformed: Vec<Vec<Rational>> =
            pts.points().iter().map(|p| g.mul_vec(p).unwrap()).collect();
        let transformed = ProjectivePointSet::new(2, transformed).unwrap();
        prop_assert_eq!(evaluation_matrix(&transformed, d).rank(), base);
    }

    #[test]
    fn conditions_report_identities(seed in any::<u64>(), d in 0u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, 3, 6);
        let r = conditions_report(&pts, d).unwrap();
        prop_assert_eq!(r.h0_ideal + r.rank, r.h0_ambient);
        prop_assert_eq!(r.independent, r.h1_ideal == 0);
        prop_assert_eq!(r.independent, r.rank == r.delta);
        if r.independent {
            prop_assert_eq!(r.h0_ideal, r.h0_ambient - r.delta);
        }
        if d == 1 {
            prop_assert_eq!(normal_crossing_check(&pts).independent_branches, r.independent);
        }
    }

    #[test]
    fn serre_duality(n in 1u64..=6, a in -20i64..=20) {
        for q_ in 0..=n {
            let dual = -a - n as i64 - 1;
            prop_assert_eq!(bott_h(n, q_, a).unwrap(), bott_h(n, n - q_, dual).unwrap());
            if q_ > 0 && q_ < n {
                prop_assert_eq!(bott_h(n, q_, a).unwrap(), 0);
            }
        }
    }

    #[test]
    fn resolution_json_roundtrip(n in 1u64..=5, h in 1u64..=4) {
        let r = eagon_northcott_resolution(n, h).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(nodal_ic::bott::Resolution::from_json(&text).unwrap(), r);
    }
}

/// χ(O(a)) on P^n as the Hilbert polynomial C(a + n, n), valid for every `a`.
fn chi_polynomial(n: i64, a: i64) -> i64 {
    (1..=n).fold(1i128, |acc, i| acc * (a + i) as i128) as i64 / (1..=n).product::<i64>()
}

fn chi_bott(n: u64, s: &LineBundleSum) -> i64 {
    (0..=n)
        .map(|q_| (if q_ % 2 == 0 { 1 } else { -1 }) * s.h(n, q_).unwrap() as i64)
        .sum()
}

#[test]
fn koszul_euler_characteristic() {
    for d1 in 1..=4u64 {
        for d2 in 1..=4u64 {
            let res = koszul_resolution(2, &[d1, d2]).unwrap();
            for t in -8i64..=10 {
                let mut chi_ideal = 0i64;
                for (i, term) in res.terms.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    chi_ideal += sign * chi_bott(2, &nodal_ic::bott::twist_term(term, t));
                }
                let expected = chi_polynomial(2, t) - (d1 * d2) as i64;
                assert_eq!(chi_ideal, expected, "d=({d1},{d2}) t={t}");
            }
        }
    }
}

fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

#[test]
fn eagon_northcott_multiplicities_from_factorials() {
    for n in 1..=6u64 {
        for h in 1..=6u64 {
            let r = eagon_northcott_resolution(n, h).unwrap();
            for p in 1..=n {
                // rank ∧^{n-p} of a rank-(h+n) bundle times rank S^{p-1} of a rank-(h+1) bundle
                let ext = factorial(h + n) / (factorial(n - p) * factorial(h + p));
                let sym = factorial(h + p - 1) / (factorial(p - 1) * factorial(h));
                let term = r.term(p as usize);
                assert_eq!(term.summands(), &[((n - p) as i64, (ext * sym) as u64)]);
            }
        }
    }
}

#[test]
fn chase_matches_grid_rank_in_the_plane() {
    for k in 2..=5u64 {
        let v = h1_vanishing_chase(&koszul_resolution(2, &[k - 1, k - 1]).unwrap(), k as i64).unwrap();
        let grid = grid_nodes(2, k as u32, None).unwrap();
        let r = conditions_report(&grid, k as u32).unwrap();
        assert_eq!(v.vanishes, r.h1_ideal == 0, "k={k}");
        if let Some(e) = v.exact_h1 {
            assert_eq!(e, r.h1_ideal, "k={k}");
        }
    }
}

#[test]
fn grid_h1_non_increasing_in_degree() {
    for (n, k) in [(2usize, 3u32), (2, 4), (2, 5), (3, 3)] {
        let grid = grid_nodes(n, k, None).unwrap();
        assert_eq!(grid.len(), (k as usize - 1).pow(n as u32));
        let profile = h1_profile(&grid, &(1..=2 * k).collect::<Vec<_>>()).unwrap();
        assert!(is_non_increasing(&profile), "{profile:?}");
        assert_eq!(profile.last().unwrap().1, 0);
    }
}
