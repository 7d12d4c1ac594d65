mod common;

use std::f64::consts::PI;

use common::*;
use knotdraw::badness::{
    badness, evaluate, fingerprint, normalize, total_bending_energy, total_crossing_angles,
    SENTINEL,
};
use knotdraw::{fixtures, BadnessWeights, ControlPoints, MinObj, Point2};
use proptest::prelude::*;
use rand::Rng;

fn k76() -> ControlPoints {
    fixtures::knot_7_6().to_minobj().unwrap().to_controlpoints()
}

fn reference(c: &ControlPoints) -> knotdraw::TopologyFingerprint {
    fingerprint(&normalize(c).unwrap().0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn fixture_component_magnitudes() {
    for (name, svg) in fixtures::ALL_SVG {
        let c = fixtures::knot(svg)
            .unwrap()
            .to_minobj()
            .unwrap()
            .to_controlpoints();
        let bend = total_bending_energy(&c).unwrap();
        assert!(bend > 4.0 * PI * PI, "{name}: {bend}");
    }
    let angles = total_crossing_angles(&k76()).unwrap();
    assert!((0.05..=1.5).contains(&angles), "{angles}");
    assert_eq!(fingerprint(&k76()).unwrap().crossing_count, 7);
}

#[test]
fn circle_normalizes_to_unit_length() {
    let c = unit_circle_4().to_controlpoints();
    let (n, scale) = normalize(&c).unwrap();
    assert!((n.arc_length() - 1.0).abs() < 1e-12);
    assert!((scale - 1.0 / c.arc_length()).abs() < 1e-15);
    let (again, s2) = normalize(&n).unwrap();
    assert!((s2 - 1.0).abs() < 1e-12);
    assert!(again
        .segments()
        .iter()
        .zip(n.segments())
        .all(|(a, b)| a.p0.distance(b.p0) < 1e-12));
}

#[test]
fn circle_bending_energy_is_four_pi_squared() {
    let target = 4.0 * PI * PI;
    let e4 = total_bending_energy(&unit_circle_4().to_controlpoints()).unwrap();
    assert!(rel(e4, target) < 0.01, "{e4}");
    let e16 = total_bending_energy(&circle(16, 3.0).to_controlpoints()).unwrap();
    assert!(rel(e16, target) < 1e-5, "{e16}");
}

#[test]
fn circle_beats_perturbed_knots() {
    let circle16 = circle(16, 1.0);
    let base = total_bending_energy(&circle16.to_controlpoints()).unwrap();
    let mut r = rng(3);
    for trial in 0..100 {
        let amp = r.gen_range(0.01..0.1);
        let mut jitter = || p(r.gen_range(-amp..amp), r.gen_range(-amp..amp));
        let nodes: Vec<Point2> = circle16.nodes().iter().map(|&q| q + jitter()).collect();
        let handles: Vec<Point2> = circle16.handles().iter().map(|&q| q + jitter()).collect();
        let m = MinObj::new(nodes, handles).unwrap();
        let e = total_bending_energy(&m.to_controlpoints()).unwrap();
        assert!(e > base, "trial {trial}: {e} <= {base}");
    }
}

#[test]
fn invariant_under_rigid_motion_and_scale() {
    let c = k76();
    let w = BadnessWeights::default();
    let fp = reference(&c);
    let b0 = evaluate(&c, &w, &fp).unwrap();
    let mut r = rng(9);
    for _ in 0..10 {
        let angle = r.gen_range(-PI..PI);
        let scale = r.gen_range(0.01..100.0);
        let shift = p(r.gen_range(-1e3..1e3), r.gen_range(-1e3..1e3));
        let moved = c.map(|q| q.rotate(angle) * scale + shift);
        let b1 = evaluate(&moved, &w, &fp).unwrap();
        for ((name, x), (_, y)) in b0.components().iter().zip(b1.components()) {
            assert!(
                (x - y).abs() <= 1e-9 * x.abs().max(1.0),
                "{name}: {x} vs {y}"
            );
        }
        assert!(rel(b0.total, b1.total) <= 1e-9);
        assert_eq!(b0.crossings, b1.crossings);
    }
}

#[test]
fn components_add_up() {
    let c = k76();
    let w = BadnessWeights::default();
    let fp = reference(&c);
    let b = evaluate(&c, &w, &fp).unwrap();
    assert_eq!(b.total, b.weighted_total(&w));
    assert_eq!(badness(&c, &w, &fp), b.total);
    for key in ["w_angle", "w_bend", "w_cross_sep", "w_repel", "w_topology"] {
        let mut w0 = w.clone();
        w0.set(key, 0.0).unwrap();
        let without = evaluate(&c, &w0, &fp).unwrap();
        let component = match key {
            "w_angle" => b.angles,
            "w_bend" => b.bend,
            "w_cross_sep" => b.cross_sep,
            "w_repel" => b.repel,
            _ => b.topology,
        };
        let removed = b.total - without.total;
        let expected = w.get(key).unwrap() * component;
        // equal up to the rounding of the two five-term sums
        assert!(
            (removed - expected).abs() <= 8.0 * f64::EPSILON * b.total,
            "{key}: {removed} vs {expected}"
        );
    }
}

#[test]
fn perpendicular_crossing_scores_zero_angle_badness() {
    // a figure-eight-like curve of straight pieces crossing at right angles
    let pts = [p(-1.0, -1.0), p(1.0, 1.0), p(1.0, -1.0), p(-1.0, 1.0)];
    let segs: Vec<_> = (0..4)
        .map(|i| knotdraw::CubicSegment::line(pts[i], pts[(i + 1) % 4]))
        .collect();
    let c = ControlPoints::new(segs).unwrap();
    let w = BadnessWeights {
        w_bend: 0.0,
        w_cross_sep: 0.0,
        w_repel: 0.0,
        w_topology: 0.0,
        ..Default::default()
    };
    let fp = reference(&c);
    assert_eq!(fp.crossing_count, 1);
    assert!(badness(&c, &w, &fp).abs() < 1e-24);
}

#[test]
fn lost_crossing_costs_b_topo() {
    let c = k76();
    let w = BadnessWeights::default();
    let mut fp = reference(&c);
    fp.crossing_pairs.push((1, 2));
    fp.crossing_pairs.sort_unstable();
    fp.crossing_count += 1;
    let b = evaluate(&c, &w, &fp).unwrap();
    assert_eq!(b.topology, w.b_topo);
}

#[test]
fn degenerate_knot_scores_sentinel() {
    let m = MinObj::from_slice(&[0.0; 12]).unwrap();
    let c = m.to_controlpoints();
    let fp = knotdraw::TopologyFingerprint {
        crossing_count: 0,
        crossing_pairs: vec![],
    };
    assert_eq!(badness(&c, &BadnessWeights::default(), &fp), SENTINEL);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn badness_is_nonnegative(offsets in prop::collection::vec(-30.0f64..30.0, 64)) {
        let m = fixtures::knot_7_6().to_minobj().unwrap();
        let mut v = m.to_knotvec().into_values();
        for (x, d) in v.iter_mut().zip(&offsets) {
            *x += d;
        }
        let c = MinObj::from_slice(&v).unwrap().to_controlpoints();
        let fp = reference(&k76());
        let b = badness(&c, &BadnessWeights::default(), &fp);
        prop_assert!(b >= 0.0);
        if let Ok(e) = evaluate(&c, &BadnessWeights::default(), &fp) {
            for (_, x) in e.components() {
                prop_assert!(x >= 0.0);
            }
        }
    }
}
