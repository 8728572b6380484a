use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use projrig::catalog::Sketch;
use projrig::realization::{normalize, random_integer_transform, Realization};
use projrig::rigidity;
use projrig::stress;
use projrig::{Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Lines with small rational chart coordinates and the points where the
/// chosen pairs meet. Incidences are detected exactly.
fn arrangement(lines: &[(i64, i64, i64)], pairs: &[(usize, usize)]) -> Option<Realization<Rational>> {
    let mut s = Sketch::<Rational>::new(0.0);
    for (k, &(a, b, d)) in lines.iter().enumerate() {
        s.line(&format!("l{k}"), [q(a, d), q(b, d), q(1, 1)]).ok()?;
    }
    let mut used = Vec::new();
    for &(i, j) in pairs {
        let (i, j) = (i % lines.len(), j % lines.len());
        if i == j || used.contains(&(i.min(j), i.max(j))) {
            continue;
        }
        used.push((i.min(j), i.max(j)));
        let p = s.meet(&format!("p{}", used.len()), &format!("l{i}"), &format!("l{j}")).ok()?;
        if p[2] == q(0, 1) {
            return None;
        }
    }
    let r = s.realize_detected().ok()?;
    r.affine_chart().ok()?;
    Some(r)
}

fn arrangement_strategy() -> impl Strategy<Value = Option<Realization<Rational>>> {
    (
        prop::collection::vec((-4i64..=4, -4i64..=4, 1i64..=3), 3..6),
        prop::collection::vec((0usize..6, 0usize..6), 2..8),
    )
        .prop_map(|(lines, pairs)| arrangement(&lines, &pairs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity_is_column_count(r in arrangement_strategy()) {
        let Some(r) = r else { return Ok(()) };
        let (m, a) = rigidity::analyze(&r, 0.0).unwrap();
        prop_assert_eq!(a.rank + a.nullity, m.cols());
    }

    #[test]
    fn trivial_motions_lie_in_kernel(r in arrangement_strategy()) {
        let Some(r) = r else { return Ok(()) };
        let m = rigidity::build_rigidity_matrix(&r).unwrap();
        for v in rigidity::trivial_motion_basis(&r, 0.0).unwrap().vectors {
            prop_assert!(m.matrix.mul_vec(&v).iter().all(|x| x == &q(0, 1)));
        }
    }

    #[test]
    fn rank_is_projectively_invariant(r in arrangement_strategy(), seed in 0u64..1000) {
        let Some(r) = r else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_integer_transform::<Rational>(&mut rng, 4);
        let image = r.apply_transform(&t).unwrap();
        prop_assume!(image.affine_chart().is_ok());
        let (_, a) = rigidity::analyze(&r, 0.0).unwrap();
        let (_, b) = rigidity::analyze(&image, 0.0).unwrap();
        prop_assert_eq!(a.rank, b.rank);
    }

    #[test]
    fn cokernel_stresses_pass_every_test(r in arrangement_strategy(), seed in 0u64..1000) {
        let Some(r) = r else { return Ok(()) };
        let m = rigidity::build_rigidity_matrix(&r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_integer_transform::<Rational>(&mut rng, 4);
        let image = r.apply_transform(&t).unwrap();
        for w in stress::cokernel_stresses(&m, 0.0) {
            let eq = stress::chart_stress_equivalence(&r, &w, 0.0).unwrap();
            prop_assert!(eq.row_dependence && eq.equilibrium && eq.combinatorial);
            let moved = stress::transport_stress(&r, &t, &w).unwrap();
            prop_assert!(stress::verify_equilibrium(&image, &moved));
            if let Ok(weave) = stress::configuration_weaving(&r) {
                let s = stress::restrict_to_weaving(r.geometry(), &weave, &w);
                prop_assert!(weave.is_stress(&s, 0.0));
            }
        }
    }

    #[test]
    fn normalization_is_scale_invariant(
        v in (-9i64..=9, -9i64..=9, -9i64..=9),
        k in prop::sample::select(vec![-3i64, -1, 2, 5]),
    ) {
        let v = [q(v.0, 1), q(v.1, 1), q(v.2, 1)];
        prop_assume!(v.iter().any(|x| x != &q(0, 1)));
        let scaled = [v[0].clone() * q(k, 1), v[1].clone() * q(k, 1), v[2].clone() * q(k, 1)];
        let n = normalize(&v, 0.0).unwrap();
        prop_assert_eq!(normalize(&scaled, 0.0).unwrap(), n.clone());
        prop_assert_eq!(normalize(&n, 0.0).unwrap(), n);
    }

    #[test]
    fn float_and_exact_ranks_agree(r in arrangement_strategy()) {
        let Some(r) = r else { return Ok(()) };
        let (_, a) = rigidity::analyze(&r, 0.0).unwrap();
        let (_, b) = rigidity::analyze(&r.to_f64(), rigidity::DEFAULT_RANK_THRESHOLD).unwrap();
        prop_assert_eq!(a.rank, b.rank);
    }
}

#[test]
fn to_f64_of_huge_rational_is_finite() {
    let big = Rational::from_ratio(i64::MAX, 3) * Rational::from_ratio(i64::MAX, 7);
    assert!(Scalar::to_f64(&big).is_finite());
}
