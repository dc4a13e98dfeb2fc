//! The α-first kill rule makes RePHINE diagrams jump when two vertex colors
//! swap order, so a perturbation of size 2ε can move the diagram by a fixed
//! amount. These tests pin that behaviour down on a five-vertex star.

use spectre_core::descriptors::compute_rephine;
use spectre_core::metrics::{d_b_r, stability_bound};
use spectre_core::{ColorFiltrationSpec, ColoredGraph};

/// Blue center 0; red leaf 3 on a cheap edge, blue leaves 1 and 4 on
/// expensive edges; isolated blue vertex 2.
fn star() -> ColoredGraph {
    ColoredGraph::from_names(&["red", "blue"], &["blue", "blue", "blue", "red", "blue"], &[(0, 1), (0, 3), (0, 4)])
        .unwrap()
}

fn spec(red: f64, blue: f64) -> ColorFiltrationSpec {
    ColorFiltrationSpec::from_names(
        &[("red", red), ("blue", blue)],
        &[("blue|red", 0.5), ("blue|blue", 3.0), ("red|red", 1.0)],
    )
    .unwrap()
}

#[test]
fn real_hole_gamma_follows_color_order() {
    let g = star();
    let hole = |s: &ColorFiltrationSpec| {
        let d = compute_rephine(&g, s).unwrap();
        let t = d.dim0.iter().find(|t| t.death.is_infinite() && !t.isolated).unwrap();
        (t.alpha, t.gamma)
    };
    assert_eq!(hole(&spec(2.1, 2.0)), (2.0, 3.0));
    assert_eq!(hole(&spec(1.9, 2.0)), (1.9, 0.5));
}

#[test]
fn distance_stays_large_as_perturbation_vanishes() {
    let g = star();
    for eps in [0.1, 1e-3, 1e-6] {
        let (f, h) = (spec(2.0 + eps, 2.0), spec(2.0 - eps, 2.0));
        let d = d_b_r(&compute_rephine(&g, &f).unwrap(), &compute_rephine(&g, &h).unwrap()).unwrap();
        let bound = stability_bound(&f, &h).unwrap();
        assert!((bound - 2.0 * eps).abs() < 1e-12);
        assert!(d.as_f64() >= 2.5, "eps {eps}: distance {d}");
    }
}
