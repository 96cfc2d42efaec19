mod common;

use common::*;
use ifs_affine::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn basis_strategy() -> impl Strategy<Value = AffineBasis> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 10f64.powf(rng.gen_range(-1.0..3.0));
        well_conditioned_basis(&mut rng, scale, 10.0 * scale)
    })
}

/// Random affine map with singular values in `[0.1, 10]` and a translation
/// of up to ten basis sizes, so the image basis stays condition-controlled.
fn affine_strategy(basis: AffineBasis) -> impl Strategy<Value = AffineMap2> {
    let size = basis
        .vertices()
        .iter()
        .map(|v| v.distance(basis.centroid()))
        .fold(0.0, f64::max);
    (
        0.0..std::f64::consts::TAU,
        0.0..std::f64::consts::TAU,
        -1.0..1.0f64,
        -1.0..1.0f64,
        any::<bool>(),
        -10.0..10.0f64,
        -10.0..10.0f64,
    )
        .prop_map(move |(t1, t2, l1, l2, flip, b1, b2)| {
            let (s1, s2) = (10f64.powf(l1), 10f64.powf(l2) * if flip { -1.0 } else { 1.0 });
            let (c1, n1, c2, n2) = (t1.cos(), t1.sin(), t2.cos(), t2.sin());
            // R(t1) · diag(s1, s2) · R(t2)
            let a11 = c1 * s1 * c2 - n1 * s2 * n2;
            let a12 = -c1 * s1 * n2 - n1 * s2 * c2;
            let a21 = n1 * s1 * c2 + c1 * s2 * n2;
            let a22 = -n1 * s1 * n2 + c1 * s2 * c2;
            AffineMap2::new(a11, a12, a21, a22, b1 * size, b2 * size).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn barycentric_matches_linear_solve(basis in basis_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..32 {
            let p = point_in_bounding_disk(&basis, &mut rng);
            let q = to_barycentric(&basis, p).unwrap();
            let o = oracle_bary(&basis, p);
            let scale = 1.0 + o.iter().map(|v| v.abs()).fold(0.0, f64::max);
            prop_assert!((q.a - o[0]).abs() <= 1e-12 * scale);
            prop_assert!((q.b - o[1]).abs() <= 1e-12 * scale);
            prop_assert!((q.c - o[2]).abs() <= 1e-12 * scale);
            prop_assert!((q.sum() - 1.0).abs() <= 1e-12);
            let back = from_barycentric(&basis, q);
            prop_assert!((back.x - p.x).abs() <= 1e-9 && (back.y - p.y).abs() <= 1e-9);
        }
    }

    #[test]
    fn barycentric_coordinates_are_affine_invariant(
        (basis, g) in basis_strategy().prop_flat_map(|b| (Just(b), affine_strategy(b))),
        seed in any::<u64>(),
    ) {
        let moved = basis.mapped(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..16 {
            let p = point_in_bounding_disk(&basis, &mut rng);
            let before = to_barycentric(&basis, p).unwrap();
            let after = to_barycentric(&moved, g.apply(p)).unwrap();
            prop_assert!((before.a - after.a).abs() <= 1e-9, "{before:?} {after:?}");
            prop_assert!((before.b - after.b).abs() <= 1e-9);
            prop_assert!((before.c - after.c).abs() <= 1e-9);
        }
    }

    #[test]
    fn retarget_equals_reconversion(
        old in basis_strategy(),
        new in basis_strategy(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point2> = (0..200).map(|_| point_in_bounding_disk(&old, &mut rng)).collect();
        let s = PointSet::new(pts).unwrap();
        let fast = apply_map_to_set(&retarget_map(&old, &new).unwrap(), &s);
        let slow = from_barycentric_set(&new, &to_barycentric_set(&old, &s).unwrap());
        let oracle: Vec<Point2> = s.iter().map(|p| oracle_reconvert(&old, &new, *p)).collect();
        prop_assert!(max_rel_deviation(fast.as_slice(), slow.as_slice()) <= 1e-9);
        prop_assert!(max_rel_deviation(fast.as_slice(), &oracle) <= 1e-9);
    }

    #[test]
    fn retarget_maps_vertices_onto_vertices(old in basis_strategy(), new in basis_strategy()) {
        let g = retarget_map(&old, &new).unwrap();
        for v in VertexId::ALL {
            let got = g.apply(old.vertex(v));
            let want = new.vertex(v);
            prop_assert!((got.x - want.x).abs() <= 1e-9 * (1.0 + want.x.abs()));
            prop_assert!((got.y - want.y).abs() <= 1e-9 * (1.0 + want.y.abs()));
        }
    }

    #[test]
    fn determinant_is_twice_signed_area(basis in basis_strategy()) {
        let (a, b, c) = (basis.a, basis.b, basis.c);
        let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
        prop_assert!((basis_determinant(&basis) - cross).abs() <= 1e-12 * cross.abs().max(1.0));
    }

    #[test]
    fn session_moves_compose(seed in any::<u64>(), k in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ifs = datasets::bundled("flower").unwrap().system().unwrap();
        let params = ChaosParams::new(2_000).seed(seed);
        let mode = BasisMode::UserTriangle(AffineBasis::from_flat([-3.0, 0.0, 4.0, 0.0, 0.0, 5.0]));
        let mut stepped = ModelingSession::init(ifs.clone(), params, mode).unwrap();
        for _ in 0..k {
            let v = VertexId::ALL[rng.gen_range(0..3)];
            let to = stepped.current_basis().vertex(v) + Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let _ = stepped.move_vertex(v, to);
        }
        let target = *stepped.current_basis();
        let mut direct = ModelingSession::init(ifs, params, mode).unwrap();
        direct.set_basis(target).unwrap();
        let a = stepped.get_frame();
        let b = direct.get_frame();
        prop_assert!(max_rel_deviation(a.points.as_slice(), b.points.as_slice()) <= 1e-9);
        let oracle: Vec<Point2> = stepped
            .base_points()
            .iter()
            .map(|p| oracle_reconvert(stepped.base_basis(), &target, *p))
            .collect();
        prop_assert!(max_rel_deviation(a.points.as_slice(), &oracle) <= 1e-9);
    }
}

#[test]
fn hundred_edit_fuzz_keeps_the_defining_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ifs = datasets::bundled("maple").unwrap().system().unwrap();
    let mut session =
        ModelingSession::init(ifs, ChaosParams::new(5_000).seed(42), BasisMode::MinimalSimplex).unwrap();
    let mut rejected = 0;
    for _ in 0..100 {
        let before = session.get_frame();
        let v = VertexId::ALL[rng.gen_range(0..3)];
        // Occasionally aim at the opposite edge's line to provoke degeneracy.
        let to = if rng.gen_bool(0.1) {
            let b = session.current_basis();
            let others: Vec<Point2> = VertexId::ALL
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| b.vertex(w))
                .collect();
            others[0] + (others[1] - others[0]) * rng.gen_range(-1.0..2.0)
        } else {
            session.current_basis().vertex(v)
                + Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
        };
        match session.move_vertex(v, to) {
            Ok(frame) => {
                assert_eq!(frame.basis.vertex(v), to);
                let oracle: Vec<Point2> = session
                    .base_points()
                    .iter()
                    .map(|p| oracle_reconvert(session.base_basis(), &frame.basis, *p))
                    .collect();
                assert!(max_rel_deviation(frame.points.as_slice(), &oracle) <= 1e-9);
                assert!(max_rel_deviation(frame.points.as_slice(), session.reconvert().as_slice()) <= 1e-9);
            }
            Err(Error::DegenerateBasis { .. }) => {
                rejected += 1;
                assert_eq!(*session.get_frame(), *before);
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(rejected > 0, "fuzz never hit a degenerate edit");
}

#[test]
fn codec_round_trips_fuzzed_documents() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let doc = random_document(&mut rng);
        let text = serialize_ifs(&doc);
        assert_eq!(parse_ifs(&text).as_ref(), Ok(&doc), "{text}");
        let noisy = inject_comments(&text, &mut rng);
        assert_eq!(parse_ifs(&noisy).as_ref(), Ok(&doc), "{noisy}");
        assert_eq!(serialize_ifs(&parse_ifs(&noisy).unwrap()), text);
    }
}
