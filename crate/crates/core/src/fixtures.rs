//! Small named graphs and filtrations used by the golden tests and the
//! discrimination harness.

use crate::filtration::ColorFiltrationSpec;
use crate::graph::ColoredGraph;

/// Two-colored 4-cycle: A=0, B=1 red; C=2, D=3 blue; edges A-B, C-D, A-C, B-D.
pub fn two_colored_square() -> ColoredGraph {
    ColoredGraph::from_names(&["red", "blue"], &["red", "red", "blue", "blue"], &[(0, 1), (2, 3), (0, 2), (1, 3)])
        .expect("valid fixture")
}

/// `f_v`: blue 1, red 2. `f_e`: red|red 1, blue|blue 2, blue|red 3.
pub fn two_colored_square_spec() -> ColorFiltrationSpec {
    ColorFiltrationSpec::from_names(
        &[("blue", 1.0), ("red", 2.0)],
        &[("red|red", 1.0), ("blue|blue", 2.0), ("blue|red", 3.0)],
    )
    .expect("valid fixture")
}

/// Monochromatic star K1,3 with center 0.
pub fn star_mono() -> ColoredGraph {
    ColoredGraph::from_names(&["red"], &["red"; 4], &[(0, 1), (0, 2), (0, 3)]).expect("valid fixture")
}

/// Monochromatic path 0-1-2-3.
pub fn path_mono() -> ColoredGraph {
    ColoredGraph::from_names(&["red"], &["red"; 4], &[(0, 1), (1, 2), (2, 3)]).expect("valid fixture")
}

/// Star with a red center and blue leaves.
pub fn star_red_center() -> ColoredGraph {
    ColoredGraph::from_names(&["red", "blue"], &["red", "blue", "blue", "blue"], &[(0, 1), (0, 2), (0, 3)])
        .expect("valid fixture")
}

/// Star with a blue center and red leaves.
pub fn star_blue_center() -> ColoredGraph {
    ColoredGraph::from_names(&["red", "blue"], &["blue", "red", "red", "red"], &[(0, 1), (0, 2), (0, 3)])
        .expect("valid fixture")
}

/// Filtration used with the star/path pairs; `f_v(red) != f_v(blue)`.
pub fn counterexample_spec() -> ColorFiltrationSpec {
    ColorFiltrationSpec::from_names(
        &[("red", 1.0), ("blue", 2.0)],
        &[("red|red", 1.0), ("blue|red", 2.0), ("blue|blue", 3.0)],
    )
    .expect("valid fixture")
}

/// Path red-blue-blue-red with `f` (blue|blue edge at `1 - eps`) and `g`
/// (all edges at 1). Vertex functions agree, so the stability bound is `3 eps`.
pub fn instability_witness(eps: f64) -> (ColoredGraph, ColorFiltrationSpec, ColorFiltrationSpec) {
    let g = ColoredGraph::from_names(&["red", "blue"], &["red", "blue", "blue", "red"], &[(0, 1), (1, 2), (2, 3)])
        .expect("valid fixture");
    let fv = [("red", 1.0), ("blue", 2.0)];
    let f = ColorFiltrationSpec::from_names(&fv, &[("blue|red", 1.0), ("blue|blue", 1.0 - eps), ("red|red", 1.0)])
        .expect("valid fixture");
    let h = ColorFiltrationSpec::from_names(&fv, &[("blue|red", 1.0), ("blue|blue", 1.0), ("red|red", 1.0)])
        .expect("valid fixture");
    (g, f, h)
}

fn cayley_z4xz4(generators: &[(usize, usize)]) -> ColoredGraph {
    let id = |a: usize, b: usize| 4 * (a % 4) + (b % 4);
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for &(x, y) in generators {
                let (u, w) = (id(a, b), id(a + x, b + y));
                if u < w {
                    edges.push((u, w));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    ColoredGraph::from_names(&["red"], &["red"; 16], &edges).expect("valid fixture")
}

/// 4x4 rook's graph, strongly regular (16, 6, 2, 2).
pub fn rook_4x4() -> ColoredGraph {
    cayley_z4xz4(&[(1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3)])
}

/// Shrikhande graph, strongly regular with the same parameters as [`rook_4x4`].
pub fn shrikhande() -> ColoredGraph {
    cayley_z4xz4(&[(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strongly_regular_pair() {
        for g in [rook_4x4(), shrikhande()] {
            assert_eq!(g.edge_count(), 48);
            assert!((0..16).all(|v| g.degree(v) == 6));
        }
        assert_ne!(rook_4x4(), shrikhande());
    }
}
