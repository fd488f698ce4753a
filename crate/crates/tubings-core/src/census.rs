//! Labeled connected graphs, exhaustively and at random.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{input, Result};
use crate::graph::Graph;
use crate::tubing::{enumerate_tubings, Tubing, ENUMERATION_CAP};

/// Largest node count for exhaustive listing (2^15 edge subsets).
pub const CENSUS_CAP: usize = 6;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .collect()
}

/// Every connected graph on nodes 1..=n, in increasing edge-mask order.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > CENSUS_CAP {
        return input(format!("census needs 1 <= n <= {CENSUS_CAP}, got {n}"));
    }
    let ps = pairs(n);
    let mut out = Vec::new();
    for mask in 0u64..1 << ps.len() {
        // A connected graph needs at least n − 1 edges.
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        let edges = ps
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

/// A uniformly random connected graph on n nodes (rejection sampling over
/// edge subsets with a spanning-tree fallback for sparse draws).
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Graph> {
    if n == 0 || n > crate::nodeset::MAX_NODES {
        return input(format!("node count {n} out of range"));
    }
    let ps = pairs(n);
    for _ in 0..64 {
        let edges: Vec<(usize, usize)> = ps.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    // Random spanning tree plus random extra edges; not uniform, rarely used.
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| {
            let j = rng.gen_range(0..i);
            let (a, b) = (order[i], order[j]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.extend(ps.iter().copied().filter(|_| rng.gen_bool(0.25)));
    Graph::new(n, edges)
}

/// A uniformly random tubing of `g`; `g` must be within the enumeration cap.
pub fn random_tubing<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Result<Tubing> {
    if g.node_count() > ENUMERATION_CAP {
        return input("graph too large for uniform tubing sampling");
    }
    let all = enumerate_tubings(g)?;
    Ok(all.choose(rng).expect("every connected graph has a tubing").clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn census_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
        assert!(connected_graphs(0).is_err());
    }

    #[test]
    fn six_node_census() {
        assert_eq!(connected_graphs(6).unwrap().len(), 26704);
    }

    #[test]
    fn random_draws_are_connected_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            let g = random_connected_graph(&mut a, n).unwrap();
            assert!(g.is_connected() && g.node_count() == n);
            assert_eq!(g, random_connected_graph(&mut b, n).unwrap());
            let t = random_tubing(&mut a, &g).unwrap();
            assert_eq!(t, random_tubing(&mut b, &g).unwrap());
        }
    }
}
