use posture_symmetry::fixtures::{mirror, symmetric_face};
use posture_symmetry::landmark::FACE_LANDMARK_COUNT;
use posture_symmetry::measures::DerivedLines;
use posture_symmetry::metrics::{average_ranks, spearman_rho};
use posture_symmetry::{compute_all, Landmarks, Measure, MeasureSeries, Point};
use proptest::prelude::*;

fn face_from(jitter: &[f64]) -> Landmarks {
    let mut i = 0;
    symmetric_face::<f64>().map_points(|_, p| {
        let q = Point::new(p.x + jitter[i], p.y + jitter[i + 1]);
        i += 2;
        q
    })
}

fn similarity(ls: &Landmarks, deg: f64, scale: f64, tx: f64, ty: f64) -> Landmarks {
    let (s, c) = deg.to_radians().sin_cos();
    ls.map_points(|_, p| Point::new(scale * (c * p.x - s * p.y) + tx, scale * (s * p.x + c * p.y) + ty))
}

fn rotate_face_about(ls: &Landmarks, deg: f64, centre: Point) -> Landmarks {
    let (s, c) = deg.to_radians().sin_cos();
    ls.map_points(|i, p| {
        if i >= FACE_LANDMARK_COUNT {
            return p;
        }
        let (dx, dy) = (p.x - centre.x, p.y - centre.y);
        Point::new(centre.x + c * dx - s * dy, centre.y + s * dx + c * dy)
    })
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

fn jitter() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-8.0..8.0f64, 140)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measures_are_similarity_invariant(
        j in jitter(), deg in -180.0..180.0f64, scale in 0.1..10.0f64,
        tx in -2e3..2e3f64, ty in -2e3..2e3f64,
    ) {
        let ls = face_from(&j);
        let base = compute_all(&ls).unwrap();
        let moved = compute_all(&similarity(&ls, deg, scale, tx, ty)).unwrap();
        for m in Measure::ALL {
            let (a, b) = (base.get(m), moved.get(m));
            if m.is_angle() {
                prop_assert!(angle_diff(a, b) < 1e-9, "{m}: {a} vs {b}");
            } else {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn head_rotation_moves_only_hhd_and_ga(j in jitter(), delta in -20.0..20.0f64) {
        let ls = face_from(&j);
        let centre = posture_symmetry::midpoint(ls.point(36), ls.point(45));
        let base = compute_all(&ls).unwrap();
        let turned = compute_all(&rotate_face_about(&ls, delta, centre)).unwrap();
        prop_assert!(angle_diff(turned.hhd, base.hhd + delta) < 1e-6);
        prop_assert!(angle_diff(turned.ga, base.ga - delta) < 1e-6);
        for m in [Measure::Fa, Measure::Osa, Measure::Rfs, Measure::Td] {
            prop_assert!((turned.get(m) - base.get(m)).abs() < 1e-9, "{m}");
        }
    }

    #[test]
    fn mirror_image_reflects_signs(j in jitter(), axis in -500.0..500.0f64) {
        let ls = face_from(&j);
        let a = compute_all(&ls).unwrap();
        let b = compute_all(&mirror(&ls, axis)).unwrap();
        prop_assert!(angle_diff(b.fa, -a.fa) < 1e-9);
        prop_assert!(angle_diff(b.osa, -a.osa) < 1e-9);
        prop_assert!(angle_diff(b.hhd, -a.hhd) < 1e-9);
        prop_assert!(angle_diff(b.ga, 180.0 - a.ga) < 1e-9);
        prop_assert!((b.rfs - 1.0 / a.rfs).abs() < 1e-12);
        prop_assert!((b.td - a.td).abs() < 1e-12);
    }

    #[test]
    fn plumb_anchor_slides_freely(j in jitter(), t in -5.0..5.0f64) {
        let ls = face_from(&j);
        let lines = DerivedLines::from_set(Measure::Td, &ls).unwrap();
        let plumb = lines.plumb_line().unwrap();
        let slid = posture_symmetry::Line2::new(
            Point::new(plumb.anchor.x + t * plumb.direction.dx, plumb.anchor.y + t * plumb.direction.dy),
            plumb.direction,
        ).unwrap();
        let a = posture_symmetry::point_line_dist(lines.face_centre, &plumb).unwrap();
        let b = posture_symmetry::point_line_dist(lines.face_centre, &slid).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}

// Rank by counting: 1 + #smaller + (#equal - 1) / 2.
fn oracle_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&x| {
            let smaller = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

fn oracle_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

fn tied_pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=10usize).prop_flat_map(|n| {
        (
            proptest::collection::vec((0..6i32).prop_map(f64::from), n),
            proptest::collection::vec(prop_oneof![(0..6i32).prop_map(f64::from), -50.0..50.0f64], n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn spearman_matches_counting_oracle((gt, pred) in tied_pairs()) {
        prop_assert_eq!(average_ranks(&gt), oracle_ranks(&gt));
        let s = MeasureSeries::new(Measure::Osa, gt.clone(), pred.clone()).unwrap();
        let got = spearman_rho(&s).unwrap();
        let want = oracle_pearson(&oracle_ranks(&gt), &oracle_ranks(&pred));
        match (got, want) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (None, None) => {}
            other => prop_assert!(false, "definedness differs: {other:?}"),
        }
    }

    #[test]
    fn spearman_ignores_monotone_transforms((gt, pred) in tied_pairs()) {
        let s = MeasureSeries::new(Measure::Ga, gt.clone(), pred.clone()).unwrap();
        let warped = MeasureSeries::new(
            Measure::Ga,
            gt.iter().map(|x| x.powi(3) + 2.0 * x).collect(),
            pred.iter().map(|x| (x / 10.0).exp()).collect(),
        ).unwrap();
        prop_assert_eq!(spearman_rho(&s).unwrap(), spearman_rho(&warped).unwrap());
    }
}
