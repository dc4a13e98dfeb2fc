//! Tuple distances and the bijection bottleneck between equal-size diagrams.

use std::collections::VecDeque;

use crate::descriptors::{Diagram, DiagramKind, Tuple};
use crate::error::{Error, Result};
use crate::filtration::ColorFiltrationSpec;
use crate::persistence::ExtendedReal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleDistanceKind {
    /// `max(|Δb|, |Δd|) + |Δα| + |Δγ|`.
    RephineD,
    /// `RephineD` plus the spectral ℓ¹ term.
    SpectreDPrime,
    /// Spectral ℓ¹ term alone.
    SpecOnly,
}

/// Optimal bottleneck value with a bijection attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    pub value: ExtendedReal,
    /// `(i, j)`: `a[i]` is matched to `b[j]`; sorted by `i`.
    pub assignment: Vec<(usize, usize)>,
}

pub fn tuple_distance_d(a: &Tuple, b: &Tuple) -> ExtendedReal {
    let db = ExtendedReal::finite((a.birth - b.birth).abs());
    db.max(a.death.abs_diff(b.death)) + (a.alpha - b.alpha).abs() + (a.gamma - b.gamma).abs()
}

/// ℓ¹ distance of two ascending lists, the shorter padded with zeros.
pub fn spec_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n).map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs()).sum()
}

pub fn tuple_distance_dprime(a: &Tuple, b: &Tuple) -> ExtendedReal {
    tuple_distance_d(a, b) + spec_distance(a.rho.values(), b.rho.values())
}

pub fn tuple_distance(kind: TupleDistanceKind, a: &Tuple, b: &Tuple) -> ExtendedReal {
    match kind {
        TupleDistanceKind::RephineD => tuple_distance_d(a, b),
        TupleDistanceKind::SpectreDPrime => tuple_distance_dprime(a, b),
        TupleDistanceKind::SpecOnly => ExtendedReal::finite(spec_distance(a.rho.values(), b.rho.values())),
    }
}

/// Minimum over bijections of the maximum matched distance.
pub fn bott(a: &[Tuple], b: &[Tuple], kind: TupleDistanceKind) -> Result<MatchResult> {
    bott_dim(a, b, kind, 0)
}

fn bott_dim(a: &[Tuple], b: &[Tuple], kind: TupleDistanceKind, dim: usize) -> Result<MatchResult> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch { dim, left: a.len(), right: b.len() });
    }
    let cost: Vec<Vec<ExtendedReal>> =
        a.iter().map(|x| b.iter().map(|y| tuple_distance(kind, x, y)).collect()).collect();
    Ok(bottleneck_assignment(&cost))
}

/// Exact minimax assignment on a square cost matrix: binary search over the
/// distinct entries, each probe a perfect-matching test.
pub fn bottleneck_assignment(cost: &[Vec<ExtendedReal>]) -> MatchResult {
    let n = cost.len();
    if n == 0 {
        return MatchResult { value: ExtendedReal::ZERO, assignment: Vec::new() };
    }
    let mut candidates: Vec<ExtendedReal> = cost.iter().flatten().copied().collect();
    candidates.sort_unstable();
    candidates.dedup();
    // the largest candidate always admits a perfect matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = perfect_matching(cost, candidates[hi]).expect("complete bipartite graph");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(cost, candidates[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let value = best.iter().enumerate().map(|(i, &j)| cost[i][j]).max().expect("non-empty");
    MatchResult { value, assignment: best.into_iter().enumerate().collect() }
}

/// Hopcroft–Karp on the graph `cost[i][j] <= t`; the diagonal is tried first
/// so identical diagrams come back with the identity matching.
fn perfect_matching(cost: &[Vec<ExtendedReal>], t: ExtendedReal) -> Option<Vec<usize>> {
    const NIL: usize = usize::MAX;
    let n = cost.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let mut row: Vec<usize> = (0..n).filter(|&j| cost[i][j] <= t).collect();
            if let Some(p) = row.iter().position(|&j| j == i) {
                row[..=p].rotate_right(1);
            }
            row
        })
        .collect();
    let mut match_l = vec![NIL; n];
    let mut match_r = vec![NIL; n];
    for i in 0..n {
        if cost[i][i] <= t {
            match_l[i] = i;
            match_r[i] = i;
        }
    }
    let mut dist = vec![0usize; n];
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for i in 0..n {
            if match_l[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..n {
            if match_l[i] == NIL {
                augment(i, &adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    match_l.iter().all(|&j| j != NIL).then_some(match_l)
}

fn augment(u: usize, adj: &[Vec<usize>], match_l: &mut [usize], match_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = match_r[v];
        let ok = w == usize::MAX || (dist[w] == dist[u].wrapping_add(1) && augment(w, adj, match_l, match_r, dist));
        if ok {
            match_l[u] = v;
            match_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

fn require_kind(d: &Diagram, kind: DiagramKind) -> Result<()> {
    if d.kind != kind {
        return Err(Error::KindMismatch(kind.to_string(), d.kind.to_string()));
    }
    Ok(())
}

/// Distance used for each diagram kind: `d` for PH and RePHINE, `d′` for
/// SpectRe and LS (unused components are zero).
pub fn distance_kind_for(kind: DiagramKind) -> TupleDistanceKind {
    match kind {
        DiagramKind::Ph | DiagramKind::Rephine => TupleDistanceKind::RephineD,
        DiagramKind::Spectre | DiagramKind::Ls => TupleDistanceKind::SpectreDPrime,
    }
}

/// Sum of the bottleneck values of both dimensions. The matching lists dim0
/// pairs, then dim1 pairs with indices offset by the dim0 size.
pub fn diagram_distance(f: &Diagram, g: &Diagram) -> Result<MatchResult> {
    if f.kind != g.kind {
        return Err(Error::KindMismatch(f.kind.to_string(), g.kind.to_string()));
    }
    let kind = distance_kind_for(f.kind);
    let m0 = bott_dim(&f.dim0, &g.dim0, kind, 0)?;
    let m1 = bott_dim(&f.dim1, &g.dim1, kind, 1)?;
    let off = f.dim0.len();
    let mut assignment = m0.assignment;
    assignment.extend(m1.assignment.into_iter().map(|(i, j)| (i + off, j + off)));
    Ok(MatchResult { value: m0.value + m1.value, assignment })
}

/// RePHINE bottleneck distance, both dimensions summed.
pub fn d_b_r(f: &Diagram, g: &Diagram) -> Result<ExtendedReal> {
    require_kind(f, DiagramKind::Rephine)?;
    require_kind(g, DiagramKind::Rephine)?;
    Ok(diagram_distance(f, g)?.value)
}

/// SpectRe bottleneck distance, both dimensions summed.
pub fn d_b_spec_r(f: &Diagram, g: &Diagram) -> Result<ExtendedReal> {
    require_kind(f, DiagramKind::Spectre)?;
    require_kind(g, DiagramKind::Spectre)?;
    Ok(diagram_distance(f, g)?.value)
}

/// `(‖f_v − g_v‖∞, ‖f_e − g_e‖∞)` over the shared colors.
pub fn filtration_sup_distance(f: &ColorFiltrationSpec, g: &ColorFiltrationSpec) -> Result<(f64, f64)> {
    if !f.same_keys(g) {
        return Err(Error::ColorSetMismatch);
    }
    let dv = f.vertex_entries().zip(g.vertex_entries()).map(|((_, a), (_, b))| (a - b).abs()).fold(0.0, f64::max);
    let de = f.edge_entries().zip(g.edge_entries()).map(|((_, a), (_, b))| (a - b).abs()).fold(0.0, f64::max);
    Ok((dv, de))
}

/// `3‖f_e − g_e‖∞ + ‖f_v − g_v‖∞`.
pub fn stability_bound(f: &ColorFiltrationSpec, g: &ColorFiltrationSpec) -> Result<f64> {
    let (dv, de) = filtration_sup_distance(f, g)?;
    Ok(3.0 * de + dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::{compute_rephine, compute_spectre, Rho};
    use crate::fixtures;
    use crate::spectral::SpectrumPolicy;

    fn t(b: f64, d: f64, a: f64, g: f64) -> Tuple {
        Tuple::new(b, ExtendedReal::from(d), a, g, Rho::None)
    }

    fn ts(b: f64, d: f64, a: f64, g: f64, rho: &[f64]) -> Tuple {
        Tuple::new(b, ExtendedReal::from(d), a, g, Rho::Values(rho.to_vec()))
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn tuple_distance_examples() {
        assert_eq!(tuple_distance_d(&t(0.0, 1.0, 2.0, 1.0), &t(0.0, 1.0, 2.0, 1.0)), ExtendedReal::ZERO);
        assert_eq!(tuple_distance_d(&t(0.0, 1.0, 2.0, 1.0), &t(0.0, 2.0, 1.0, 2.0)).as_f64(), 3.0);
        assert!(tuple_distance_d(&t(0.0, INF, 1.0, 2.0), &t(0.0, 3.0, 2.0, 1.0)).is_infinite());
        assert_eq!(tuple_distance_d(&t(0.0, INF, 1.0, 2.0), &t(0.0, INF, 1.0, 2.0)), ExtendedReal::ZERO);
    }

    #[test]
    fn spec_distance_examples() {
        assert_eq!(spec_distance(&[2.0], &[2.0]), 0.0);
        assert_eq!(spec_distance(&[2.0], &[2.0, 2.0, 4.0]), 6.0);
        let s = 2f64.sqrt();
        assert!((spec_distance(&[2.0], &[2.0 - s, 2.0, 2.0 + s]) - (4.0 + 2.0 * s)).abs() < 1e-12);
        assert_eq!(spec_distance(&[], &[]), 0.0);
    }

    #[test]
    fn dprime_examples() {
        let a = ts(0.0, 1.0, 2.0, 1.0, &[2.0]);
        assert_eq!(tuple_distance_dprime(&a, &a), ExtendedReal::ZERO);
        assert_eq!(tuple_distance_dprime(&a, &ts(0.0, 2.0, 1.0, 2.0, &[2.0])).as_f64(), 3.0);
        assert_eq!(tuple_distance_dprime(&a, &ts(0.0, 1.0, 2.0, 1.0, &[2.0, 2.0, 4.0])).as_f64(), 6.0);
    }

    #[test]
    fn bott_examples() {
        let a = [t(0.0, 1.0, 2.0, 1.0), t(0.0, INF, 1.0, 2.0)];
        let b = [t(0.0, 2.0, 1.0, 2.0), t(0.0, INF, 1.0, 2.0)];
        let m = bott(&a, &b, TupleDistanceKind::RephineD).unwrap();
        assert_eq!(m.value.as_f64(), 3.0);
        assert_eq!(m.assignment, vec![(0, 0), (1, 1)]);
        let single = bott(&a[..1], &b[..1], TupleDistanceKind::RephineD).unwrap();
        assert_eq!(single.value.as_f64(), 3.0);
        let same = bott(&a, &a, TupleDistanceKind::RephineD).unwrap();
        assert_eq!(same.value, ExtendedReal::ZERO);
        assert_eq!(same.assignment, vec![(0, 0), (1, 1)]);
        assert!(matches!(bott(&a, &b[..1], TupleDistanceKind::RephineD), Err(Error::CardinalityMismatch { .. })));
        assert_eq!(bott(&[], &[], TupleDistanceKind::RephineD).unwrap().value, ExtendedReal::ZERO);
    }

    #[test]
    fn swapped_assignment_found() {
        let a = [t(0.0, 1.0, 0.0, 0.0), t(0.0, 5.0, 0.0, 0.0)];
        let b = [t(0.0, 5.5, 0.0, 0.0), t(0.0, 1.5, 0.0, 0.0)];
        let m = bott(&a, &b, TupleDistanceKind::RephineD).unwrap();
        assert_eq!(m.value.as_f64(), 0.5);
        assert_eq!(m.assignment, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn rephine_distance_under_edge_shift() {
        let g = fixtures::two_colored_square();
        let f = fixtures::two_colored_square_spec();
        let h = f.map_values(|x| x, |x| if x == 1.0 { 1.5 } else { x }).unwrap();
        let df = compute_rephine(&g, &f).unwrap();
        let dh = compute_rephine(&g, &h).unwrap();
        let d = d_b_r(&df, &dh).unwrap().as_f64();
        assert!(d <= 3.0 * 0.5 + 1e-12 && d > 0.0);
        assert_eq!(d, d_b_r(&dh, &df).unwrap().as_f64());
        assert_eq!(d_b_r(&df, &df).unwrap(), ExtendedReal::ZERO);
        let s = compute_spectre(&g, &f, &SpectrumPolicy::full()).unwrap();
        assert!(d_b_r(&df, &s).is_err());
    }

    #[test]
    fn instability_witness_distance() {
        let s2 = 2f64.sqrt();
        for eps in [0.1, 0.01, 0.001] {
            let (g, f, h) = fixtures::instability_witness(eps);
            let full = SpectrumPolicy::full();
            let d =
                d_b_spec_r(&compute_spectre(&g, &f, &full).unwrap(), &compute_spectre(&g, &h, &full).unwrap()).unwrap();
            assert!(d.as_f64() >= 4.0 + 2.0 * s2 - 1e-9, "{d}");
            let (dv, de) = filtration_sup_distance(&f, &h).unwrap();
            assert_eq!(dv, 0.0);
            assert!((de - eps).abs() < 1e-15);
        }
    }

    #[test]
    fn sup_distance_examples() {
        let f = fixtures::two_colored_square_spec();
        assert_eq!(filtration_sup_distance(&f, &f).unwrap(), (0.0, 0.0));
        let g = ColorFiltrationSpec::from_names(
            &[("blue", 1.0), ("red", 2.5)],
            &[("red|red", 1.0), ("blue|blue", 2.0), ("blue|red", 3.0)],
        )
        .unwrap();
        assert_eq!(filtration_sup_distance(&f, &g).unwrap(), (0.5, 0.0));
        let other = fixtures::counterexample_spec();
        assert_eq!(filtration_sup_distance(&f, &other).unwrap().0, 1.0);
        let missing = ColorFiltrationSpec::from_names(&[("blue", 1.0)], &[("blue|blue", 2.0)]).unwrap();
        assert!(matches!(filtration_sup_distance(&f, &missing), Err(Error::ColorSetMismatch)));
    }
}
