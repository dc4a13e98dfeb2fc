use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spectre_core::bench::random_spec;
use spectre_core::descriptors::{
    compute_rephine, compute_spectre, diagram_to_json, multiset_equal, parse_diagram, spectre_from_trace, TieBreak,
};
use spectre_core::filtration::{filtration_to_json, induce, parse_filtration};
use spectre_core::graph::{connected_components, graph_to_json, parse_graph, permute, random_colored_graph};
use spectre_core::metrics::{bott, d_b_r, d_b_spec_r, tuple_distance, TupleDistanceKind};
use spectre_core::persistence::{merge_trace_with_order, UnionFind};
use spectre_core::spectral::{
    delta1_nonzero_spectrum, eigenvalues_full, exact, laplacian, nonzero_laplacian_spectrum, power_method,
};
use spectre_core::{
    ColorFiltrationSpec, ColorId, ColoredGraph, DiagramKind, ExtendedReal, FiltrationKind, Rho, SpectrumPolicy, Tuple,
    VertexPermutation,
};

fn colors() -> Vec<ColorId> {
    vec![ColorId::from("red"), ColorId::from("blue"), ColorId::from("green")]
}

fn graph(n: usize, p: f64, seed: u64) -> ColoredGraph {
    random_colored_graph(n, p, &colors()[..2], seed).unwrap()
}

fn spec(seed: u64, grid: bool) -> ColorFiltrationSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_spec(&colors()[..2], 0.0..4.0, 0.5..4.0, grid, &mut rng).unwrap()
}

fn perm(n: usize, seed: u64) -> VertexPermutation {
    VertexPermutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn arb_tuple(with_rho: bool) -> impl Strategy<Value = Tuple> {
    (0u8..8, prop::option::of(0u8..8), 0u8..8, 0u8..8, prop::collection::vec(1u8..10, 0..4)).prop_map(
        move |(b, d, a, g, mut rho)| {
            let birth = b as f64 * 0.5;
            let death = d.map_or(ExtendedReal::INFINITY, |d| ExtendedReal::finite(birth + d as f64 * 0.5));
            rho.sort_unstable();
            let rho = if with_rho { Rho::Values(rho.into_iter().map(|x| x as f64 * 0.5).collect()) } else { Rho::None };
            Tuple::new(birth, death, a as f64 * 0.5, g as f64 * 0.5, rho)
        },
    )
}

fn brute_bott(a: &[Tuple], b: &[Tuple], kind: TupleDistanceKind) -> ExtendedReal {
    let n = a.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut best = ExtendedReal::INFINITY;
    // Heap's algorithm over all bijections.
    let mut c = vec![0; n];
    let eval = |idx: &[usize]| {
        idx.iter()
            .enumerate()
            .map(|(i, &j)| tuple_distance(kind, &a[i], &b[j]))
            .fold(ExtendedReal::ZERO, ExtendedReal::max)
    };
    best = best.min(eval(&idx));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i)
            } else {
                idx.swap(c[i], i)
            }
            best = best.min(eval(&idx));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn brute_components(g: &ColoredGraph) -> usize {
    // repeated relaxation of the minimum label along edges
    let mut label: Vec<usize> = (0..g.n()).collect();
    loop {
        let mut changed = false;
        for &(u, w) in g.edges() {
            let m = label[u].min(label[w]);
            if label[u] != m || label[w] != m {
                label[u] = m;
                label[w] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    label.sort_unstable();
    label.dedup();
    label.len()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn graph_json_round_trips(n in 0usize..12, p in 0.0f64..1.0, seed: u64) {
        let g = graph(n, p, seed);
        let text = graph_to_json(&g);
        let back = parse_graph(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_json(&back), text);
    }

    #[test]
    fn filtration_json_round_trips(seed: u64, grid: bool) {
        let f = spec(seed, grid);
        let text = filtration_to_json(&f);
        let back = parse_filtration(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(filtration_to_json(&back), text);
    }

    #[test]
    fn diagram_json_round_trips(n in 1usize..9, p in 0.0f64..0.8, seed: u64, grid: bool) {
        let g = graph(n, p, seed);
        let f = spec(seed ^ 1, grid);
        let s = compute_spectre(&g, &f, &SpectrumPolicy::full()).unwrap();
        for d in [s.clone(), s.project(DiagramKind::Rephine).unwrap(), s.project(DiagramKind::Ls).unwrap(), s.project(DiagramKind::Ph).unwrap()] {
            let text = diagram_to_json(&d);
            let back = parse_diagram(text.as_bytes()).unwrap();
            prop_assert_eq!(diagram_to_json(&back), text);
            prop_assert!(multiset_equal(&back, &d, 0.0).unwrap());
        }
    }

    #[test]
    fn permutation_inverse_restores_graph(n in 0usize..12, p in 0.0f64..1.0, seed: u64) {
        let g = graph(n, p, seed);
        let q = perm(n, seed);
        let back = permute(&permute(&g, &q).unwrap(), &q.inverse()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn component_count_matches_label_propagation(n in 0usize..14, p in 0.0f64..0.5, seed: u64) {
        let g = graph(n, p, seed);
        prop_assert_eq!(connected_components(&g).len(), brute_components(&g));
        let mut uf = UnionFind::new(n);
        let mut merges = 0;
        for &(u, w) in g.edges() {
            let (a, b) = (uf.find(u), uf.find(w));
            if a != b {
                uf.link(a, b);
                merges += 1;
            }
        }
        prop_assert_eq!(n - merges, brute_components(&g));
    }

    #[test]
    fn edge_order_and_tie_break_do_not_change_spectre(n in 1usize..10, p in 0.1f64..0.8, seed: u64) {
        let g = graph(n, p, seed);
        let f = spec(seed ^ 2, true);
        let vals = induce(&f, &g).unwrap();
        let full = SpectrumPolicy::full();
        let base = diagram_to_json(&compute_spectre(&g, &f, &full).unwrap());
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        let q = perm(order.len(), seed ^ 3);
        order = (0..order.len()).map(|i| q.apply(i)).collect();
        let trace = merge_trace_with_order(&g, &vals, FiltrationKind::Edge, order);
        for tie in [TieBreak::LowestIndexDies, TieBreak::HighestIndexDies] {
            let other = spectre_from_trace(&g, &vals, &trace, &full, tie).unwrap();
            prop_assert_eq!(diagram_to_json(&other), base.clone());
        }
    }

    #[test]
    fn bott_matches_brute_force(
        len in 0usize..6,
        kind_ix in 0usize..3,
        a in prop::collection::vec(arb_tuple(true), 6),
        b in prop::collection::vec(arb_tuple(true), 6),
    ) {
        let kind = [TupleDistanceKind::RephineD, TupleDistanceKind::SpectreDPrime, TupleDistanceKind::SpecOnly][kind_ix];
        let (a, b) = (&a[..len], &b[..len]);
        let m = bott(a, b, kind).unwrap();
        prop_assert_eq!(m.value, brute_bott(a, b, kind));
        let mut seen = vec![false; len];
        for &(i, j) in &m.assignment {
            prop_assert!(i < len && j < len && !seen[j]);
            seen[j] = true;
        }
        prop_assert_eq!(m.assignment.len(), len);
    }

    #[test]
    fn descriptor_distances_are_metrics(n in 1usize..8, p in 0.0f64..0.7, seed: u64, grid: bool) {
        let g = graph(n, p, seed);
        let full = SpectrumPolicy::full();
        let fs: Vec<_> = (0..3).map(|k| spec(seed.wrapping_add(k), grid)).collect();
        let r: Vec<_> = fs.iter().map(|f| compute_rephine(&g, f).unwrap()).collect();
        let s: Vec<_> = fs.iter().map(|f| compute_spectre(&g, f, &full).unwrap()).collect();
        for i in 0..3 {
            prop_assert_eq!(d_b_r(&r[i], &r[i]).unwrap(), ExtendedReal::ZERO);
            prop_assert_eq!(d_b_spec_r(&s[i], &s[i]).unwrap(), ExtendedReal::ZERO);
            for j in 0..3 {
                prop_assert_eq!(d_b_r(&r[i], &r[j]).unwrap(), d_b_r(&r[j], &r[i]).unwrap());
                prop_assert_eq!(d_b_spec_r(&s[i], &s[j]).unwrap(), d_b_spec_r(&s[j], &s[i]).unwrap());
                for k in 0..3 {
                    let tri = |d: &dyn Fn(usize, usize) -> ExtendedReal| d(i, k).as_f64() <= d(i, j).as_f64() + d(j, k).as_f64() + 1e-9;
                    prop_assert!(tri(&|x, y| d_b_r(&r[x], &r[y]).unwrap()));
                    prop_assert!(tri(&|x, y| d_b_spec_r(&s[x], &s[y]).unwrap()));
                }
            }
        }
    }

    #[test]
    fn projections_agree_with_direct_computation(n in 1usize..10, p in 0.0f64..0.8, seed: u64, grid: bool) {
        let g = graph(n, p, seed);
        let f = spec(seed, grid);
        let s = compute_spectre(&g, &f, &SpectrumPolicy::full()).unwrap();
        prop_assert_eq!(diagram_to_json(&s.project(DiagramKind::Rephine).unwrap()), diagram_to_json(&compute_rephine(&g, &f).unwrap()));
        prop_assert_eq!(s.len(), n + g.cycle_rank());
    }

    #[test]
    fn exact_and_dense_spectra_agree(n in 1usize..14, p in 0.0f64..0.9, seed: u64) {
        let g = graph(n, p, seed);
        for comp in connected_components(&g) {
            let m = laplacian(&g, &comp).unwrap();
            let mut dense = eigenvalues_full(&m, f64::EPSILON).unwrap().values;
            dense.sort_by(f64::total_cmp);
            let zeros = dense.iter().take_while(|x| x.abs() < 1e-8).count();
            prop_assert_eq!(zeros, 1);
            let rows: Vec<Vec<i64>> = (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j) as i64).collect()).collect();
            let exact = exact::nonzero_eigenvalues(&rows, 2 * comp.len() as u64).unwrap();
            prop_assert_eq!(exact.len(), dense.len() - 1);
            for (x, y) in exact.iter().zip(&dense[1..]) {
                prop_assert!((x - y).abs() <= 1e-9 * y.max(1.0), "{} vs {}", x, y);
            }
            let trace: f64 = exact.iter().sum();
            let degrees: usize = comp.iter().map(|&v| g.degree(v)).sum();
            prop_assert!((trace - degrees as f64).abs() <= 1e-9);
            prop_assert_eq!(nonzero_laplacian_spectrum(&g, &comp).unwrap().values, exact);
        }
    }

    #[test]
    fn delta1_matches_delta0(n in 1usize..12, p in 0.0f64..0.7, seed: u64) {
        let g = graph(n, p, seed);
        for comp in connected_components(&g) {
            let d0 = nonzero_laplacian_spectrum(&g, &comp).unwrap().values;
            let d1 = delta1_nonzero_spectrum(&g, &comp).unwrap().values;
            prop_assert_eq!(d0.len(), d1.len());
            for (x, y) in d0.iter().zip(&d1) {
                prop_assert!((x - y).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn power_method_brackets_largest_eigenvalue(n in 2usize..16, p in 0.2f64..0.9, seed: u64) {
        let g = graph(n, p, seed);
        let tol = 1e-10;
        for comp in connected_components(&g).into_iter().filter(|c| c.len() > 1) {
            let m = laplacian(&g, &comp).unwrap();
            let top = eigenvalues_full(&m, f64::EPSILON).unwrap().values.into_iter().fold(0.0, f64::max);
            let est = power_method(&m, 100_000, tol, seed);
            prop_assert!(est.converged);
            prop_assert!(est.value <= top * (1.0 + 1e-9) && est.value >= top * (1.0 - 1e-6), "{} vs {}", est.value, top);
        }
    }
}
