//! Graph isomorphism and fingerprints.
//!
//! Both go through the same reduction: vertices with equal color and equal
//! open (or closed) neighborhoods are interchangeable, so each such twin
//! class is replaced by one vertex whose color records the old color, the
//! class size and whether the class was a clique. This is repeated until no
//! twins remain. The reduction is canonical, so two graphs are isomorphic
//! iff their reductions are isomorphic as colored graphs. What remains is
//! decided by color refinement with individualization and backtracking.
//!
//! Blow-up graphs enter the same pipeline directly at the quotient level,
//! which makes their reductions (and fingerprints) identical to those of
//! the explicit graphs they describe.

use std::collections::HashMap;

use super::bits::BitMatrix;
use super::blowup::BlowupGraph;
use super::ZdGraph;
use crate::error::{Error, Result};
use crate::hash::Fnv64;

/// Largest explicit graph accepted by [`graphs_isomorphic`].
pub const ISO_CAP: usize = 4096;

/// How new colors are named. `Joint` ranks the keys of all graphs together,
/// which is exact but only comparable within one call; `Hash` digests each
/// key, which is comparable across calls.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Naming {
    Joint,
    Hash,
}

#[derive(Clone, Debug)]
struct Colored {
    adj: BitMatrix,
    colors: Vec<u64>,
    /// Original vertices represented by each vertex, in a canonical order.
    members: Vec<Vec<usize>>,
}

type Key = (u64, u128, bool);

fn hash_key(k: &Key) -> u64 {
    let mut h = Fnv64::new();
    h.write(b"twin").write_u64(k.0).write_u128(k.1).write(&[k.2 as u8]);
    h.finish()
}

fn hash_signature(color: u64, neighbors: &[u64]) -> u64 {
    let mut h = Fnv64::new();
    h.write(b"refine").write_u64(color).write_u64(neighbors.len() as u64);
    for &c in neighbors {
        h.write_u64(c);
    }
    h.finish()
}

/// Assigns names to keys: ranks in the sorted set of all keys, or hashes.
fn name_keys<K: Ord + Clone>(keys: &[Vec<K>], naming: Naming, hash: impl Fn(&K) -> u64) -> Vec<Vec<u64>> {
    match naming {
        Naming::Hash => keys.iter().map(|ks| ks.iter().map(&hash).collect()).collect(),
        Naming::Joint => {
            let mut all: Vec<K> = keys.iter().flatten().cloned().collect();
            all.sort();
            all.dedup();
            keys.iter()
                .map(|ks| ks.iter().map(|k| all.binary_search(k).expect("key present") as u64).collect())
                .collect()
        }
    }
}

impl Colored {
    fn from_graph(g: &ZdGraph) -> Self {
        let n = g.vertex_count();
        Self { adj: g.matrix().clone(), colors: vec![0; n], members: (0..n).map(|v| vec![v]).collect() }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Twin classes in order of their first vertex, with the clique flag.
    fn twin_groups(&self) -> Vec<(Vec<usize>, bool)> {
        let n = self.len();
        let mut open: HashMap<(u64, &[u64]), Vec<usize>> = HashMap::new();
        let mut closed_rows: Vec<Vec<u64>> = Vec::with_capacity(n);
        for x in 0..n {
            let mut r = self.adj.row(x).to_vec();
            r[x / 64] |= 1 << (x % 64);
            closed_rows.push(r);
        }
        let mut closed: HashMap<(u64, &[u64]), Vec<usize>> = HashMap::new();
        for x in 0..n {
            open.entry((self.colors[x], self.adj.row(x))).or_default().push(x);
            closed.entry((self.colors[x], closed_rows[x].as_slice())).or_default().push(x);
        }
        let mut assigned = vec![false; n];
        let mut groups = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let f = &open[&(self.colors[x], self.adj.row(x))];
            let t = &closed[&(self.colors[x], closed_rows[x].as_slice())];
            let (members, clique) = if f.len() > 1 {
                (f.clone(), false)
            } else if t.len() > 1 {
                (t.clone(), true)
            } else {
                (vec![x], true)
            };
            for &m in &members {
                assigned[m] = true;
            }
            groups.push((members, clique));
        }
        groups
    }

    fn contract(&self, groups: &[(Vec<usize>, bool)], colors: Vec<u64>) -> Self {
        let m = groups.len();
        let mut adj = BitMatrix::new(m);
        for a in 0..m {
            for b in a + 1..m {
                if self.adj.get(groups[a].0[0], groups[b].0[0]) {
                    adj.set(a, b);
                    adj.set(b, a);
                }
            }
        }
        let members = groups.iter().map(|(g, _)| g.iter().flat_map(|&v| self.members[v].iter().copied()).collect()).collect();
        Self { adj, colors, members }
    }
}

/// One round of twin contraction over all graphs. Nothing is relabeled
/// unless some graph has a twin class.
fn collapse_pass(graphs: &mut [Colored], naming: Naming) -> bool {
    let groups: Vec<Vec<(Vec<usize>, bool)>> = graphs.iter().map(Colored::twin_groups).collect();
    if groups.iter().zip(graphs.iter()).all(|(gs, g)| gs.len() == g.len()) {
        return false;
    }
    let keys: Vec<Vec<Key>> = groups
        .iter()
        .zip(graphs.iter())
        .map(|(gs, g)| gs.iter().map(|(m, clique)| (g.colors[m[0]], m.len() as u128, *clique)).collect())
        .collect();
    let names = name_keys(&keys, naming, hash_key);
    for ((g, gs), colors) in graphs.iter_mut().zip(&groups).zip(names) {
        *g = g.contract(gs, colors);
    }
    true
}

fn collapse(graphs: &mut [Colored], naming: Naming) {
    while collapse_pass(graphs, naming) {}
}

/// The first contraction round of `expand(b)`, computed from the quotient:
/// the universal clique is one more node joined to every class.
fn reduce_blowup(bs: &[&BlowupGraph], naming: Naming) -> Vec<Colored> {
    struct Node {
        mult: u128,
        clique: bool,
    }
    let quotients: Vec<(Vec<Node>, BitMatrix)> = bs
        .iter()
        .map(|b| {
            let offset = usize::from(b.universal() > 0);
            let mut nodes: Vec<Node> = Vec::new();
            if offset == 1 {
                nodes.push(Node { mult: b.universal(), clique: true });
            }
            nodes.extend(b.classes().iter().map(|c| Node { mult: c.mult, clique: c.clique }));
            let mut adj = BitMatrix::new(nodes.len());
            for i in 0..b.classes().len() {
                if offset == 1 {
                    adj.set(0, i + 1);
                    adj.set(i + 1, 0);
                }
                for j in b.cross_matrix().row_iter(i) {
                    adj.set(i + offset, j + offset);
                }
            }
            (nodes, adj)
        })
        .collect();

    let groups: Vec<Vec<(Vec<usize>, bool)>> = quotients
        .iter()
        .map(|(nodes, adj)| {
            let n = nodes.len();
            let closed: Vec<Vec<u64>> = (0..n)
                .map(|x| {
                    let mut r = adj.row(x).to_vec();
                    r[x / 64] |= 1 << (x % 64);
                    r
                })
                .collect();
            let mut open_map: HashMap<&[u64], Vec<usize>> = HashMap::new();
            let mut closed_map: HashMap<&[u64], Vec<usize>> = HashMap::new();
            for (x, node) in nodes.iter().enumerate() {
                if !node.clique || node.mult == 1 {
                    open_map.entry(adj.row(x)).or_default().push(x);
                }
                if node.clique || node.mult == 1 {
                    closed_map.entry(&closed[x]).or_default().push(x);
                }
            }
            let mut assigned = vec![false; n];
            let mut out = Vec::new();
            for x in 0..n {
                if assigned[x] {
                    continue;
                }
                // a node only joins groups of the kind it was entered under
                let f = open_map.get(adj.row(x)).filter(|g| g.len() > 1 && g.contains(&x));
                let t = closed_map.get(closed[x].as_slice()).filter(|g| g.len() > 1 && g.contains(&x));
                let (members, clique) = match (f, t) {
                    (Some(g), _) => (g.clone(), false),
                    (None, Some(g)) => (g.clone(), true),
                    (None, None) => (vec![x], nodes[x].clique || nodes[x].mult == 1),
                };
                for &m in &members {
                    assigned[m] = true;
                }
                out.push((members, clique));
            }
            out
        })
        .collect();

    let merges = quotients.iter().zip(&groups).any(|((nodes, _), gs)| gs.len() < nodes.len() || nodes.iter().any(|n| n.mult > 1));
    let keys: Vec<Vec<Key>> = quotients
        .iter()
        .zip(&groups)
        .map(|((nodes, _), gs)| gs.iter().map(|(m, clique)| (0, m.iter().map(|&x| nodes[x].mult).sum(), *clique)).collect())
        .collect();
    let names = if merges { name_keys(&keys, naming, hash_key) } else { keys.iter().map(|ks| vec![0; ks.len()]).collect() };

    quotients
        .iter()
        .zip(&groups)
        .zip(names)
        .map(|(((nodes, adj), gs), colors)| {
            let base = Colored { adj: adj.clone(), colors: vec![0; nodes.len()], members: vec![Vec::new(); nodes.len()] };
            base.contract(gs, colors)
        })
        .collect()
}

/// Joint color refinement to a stable partition. Returns false as soon as
/// the color histograms of the graphs differ.
fn refine(graphs: &[&Colored], colors: &mut [Vec<u64>], naming: Naming) -> bool {
    let distinct = |cs: &[Vec<u64>]| {
        let mut all: Vec<u64> = cs.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut count = distinct(colors);
    loop {
        if !same_histograms(colors) {
            return false;
        }
        let keys: Vec<Vec<(u64, Vec<u64>)>> = graphs
            .iter()
            .zip(colors.iter())
            .map(|(g, cs)| {
                (0..g.len())
                    .map(|x| {
                        let mut nb: Vec<u64> = g.adj.row_iter(x).map(|y| cs[y]).collect();
                        nb.sort_unstable();
                        (cs[x], nb)
                    })
                    .collect()
            })
            .collect();
        let next = name_keys(&keys, naming, |(c, nb)| hash_signature(*c, nb));
        let next_count = distinct(&next);
        for (c, n) in colors.iter_mut().zip(next) {
            *c = n;
        }
        if next_count == count {
            return same_histograms(colors);
        }
        count = next_count;
    }
}

fn histogram(cs: &[u64]) -> Vec<(u64, usize)> {
    let mut sorted = cs.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(u64, usize)> = Vec::new();
    for c in sorted {
        match out.last_mut() {
            Some((last, n)) if *last == c => *n += 1,
            _ => out.push((c, 1)),
        }
    }
    out
}

fn same_histograms(colors: &[Vec<u64>]) -> bool {
    let first = histogram(&colors[0]);
    colors[1..].iter().all(|c| histogram(c) == first)
}

/// Color-preserving isomorphism `g → h` by individualization-refinement.
fn search(g: &Colored, h: &Colored, cg: Vec<u64>, ch: Vec<u64>) -> Option<Vec<usize>> {
    let mut colors = vec![cg, ch];
    if !refine(&[g, h], &mut colors, Naming::Joint) {
        return None;
    }
    let ch = colors.pop().expect("two graphs");
    let cg = colors.pop().expect("two graphs");
    let hist = histogram(&cg);
    let Some(&(target, _)) = hist.iter().filter(|&&(_, n)| n > 1).min_by_key(|&&(c, n)| (n, c)) else {
        let mut position: HashMap<u64, usize> = HashMap::new();
        for (y, &c) in ch.iter().enumerate() {
            position.insert(c, y);
        }
        let map: Vec<usize> = cg.iter().map(|c| position[c]).collect();
        let ok = (0..g.len()).all(|u| (u + 1..g.len()).all(|v| g.adj.get(u, v) == h.adj.get(map[u], map[v])));
        return ok.then_some(map);
    };
    let fresh = hist.last().map_or(0, |&(c, _)| c) + 1;
    let v = cg.iter().position(|&c| c == target).expect("class nonempty");
    for w in (0..h.len()).filter(|&w| ch[w] == target) {
        let mut cg2 = cg.clone();
        let mut ch2 = ch.clone();
        cg2[v] = fresh;
        ch2[w] = fresh;
        if let Some(map) = search(g, h, cg2, ch2) {
            return Some(map);
        }
    }
    None
}

fn reduced_isomorphism(g: &Colored, h: &Colored) -> Option<Vec<usize>> {
    if g.len() != h.len() {
        return None;
    }
    search(g, h, g.colors.clone(), h.colors.clone())
}

/// Decides `g ≅ h`; on success returns a bijection `map` (vertex of `g` to
/// vertex of `h`) that has been checked edge by edge.
pub fn graphs_isomorphic(g: &ZdGraph, h: &ZdGraph) -> Result<Option<Vec<usize>>> {
    for x in [g, h] {
        if x.vertex_count() > ISO_CAP {
            return Err(Error::CapExceeded { what: "graph vertices", size: x.vertex_count() as u128, cap: ISO_CAP as u128 });
        }
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut pair = [Colored::from_graph(g), Colored::from_graph(h)];
    collapse(&mut pair, Naming::Joint);
    let [rg, rh] = pair;
    let Some(reduced) = reduced_isomorphism(&rg, &rh) else {
        return Ok(None);
    };
    let mut map = vec![usize::MAX; g.vertex_count()];
    for (a, &b) in reduced.iter().enumerate() {
        debug_assert_eq!(rg.members[a].len(), rh.members[b].len());
        for (&x, &y) in rg.members[a].iter().zip(&rh.members[b]) {
            map[x] = y;
        }
    }
    if g.is_isomorphism(h, &map) {
        Ok(Some(map))
    } else {
        Err(Error::InvalidArgument("internal error: isomorphism witness failed verification".into()))
    }
}

/// Decides `expand(a) ≅ expand(b)` without expanding.
pub fn blowup_isomorphic(a: &BlowupGraph, b: &BlowupGraph) -> bool {
    if a.vertex_count() != b.vertex_count() {
        return false;
    }
    let mut pair = reduce_blowup(&[a, b], Naming::Joint);
    collapse(&mut pair, Naming::Joint);
    reduced_isomorphism(&pair[0], &pair[1]).is_some()
}

fn digest(mut g: Colored) -> String {
    collapse(std::slice::from_mut(&mut g), Naming::Hash);
    let mut colors = vec![g.colors.clone()];
    refine(&[&g], &mut colors, Naming::Hash);
    let cs = &colors[0];
    let mut h = Fnv64::new();
    h.write(b"zdg-fingerprint-v1");
    let hist = histogram(cs);
    h.write_u64(hist.len() as u64);
    for (c, n) in hist {
        h.write_u64(c).write_u64(n as u64);
    }
    let mut edges: Vec<(u64, u64)> = Vec::new();
    for u in 0..g.len() {
        for v in g.adj.row_iter(u).filter(|&v| v > u) {
            edges.push((cs[u].min(cs[v]), cs[u].max(cs[v])));
        }
    }
    edges.sort_unstable();
    h.write_u64(edges.len() as u64);
    for (a, b) in edges {
        h.write_u64(a).write_u64(b);
    }
    format!("{:016x}", h.finish())
}

/// Isomorphism-invariant digest of a graph.
pub fn fingerprint(g: &ZdGraph) -> String {
    digest(Colored::from_graph(g))
}

/// Digest of `expand(b)`, computed without expanding; equals
/// `fingerprint(&expand(b))` whenever the expansion fits in memory.
pub fn fingerprint_blowup(b: &BlowupGraph) -> String {
    let reduced = reduce_blowup(&[b], Naming::Hash).pop().expect("one graph");
    digest(reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zdg::blowup::BlowupClass;
    use crate::zdg::expand;

    fn iso(g: &ZdGraph, h: &ZdGraph) -> bool {
        graphs_isomorphic(g, h).unwrap().is_some()
    }

    #[test]
    fn basic_examples() {
        assert!(iso(&ZdGraph::complete(5), &ZdGraph::complete(5)));
        assert!(!iso(&ZdGraph::complete(3), &ZdGraph::path(3)));
        assert!(iso(&ZdGraph::complete(2), &ZdGraph::from_edges(2, &[(0, 1)]).unwrap()));
        assert!(iso(&ZdGraph::empty(0), &ZdGraph::empty(0)));
    }

    #[test]
    fn witness_on_permuted_graph() {
        // Petersen graph: no twins, so the search does the work.
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = ZdGraph::from_edges(10, &edges).unwrap();
        let perm = [3, 7, 1, 9, 0, 2, 8, 5, 6, 4];
        let h = g.permuted(&perm).unwrap();
        let map = graphs_isomorphic(&g, &h).unwrap().unwrap();
        assert!(g.is_isomorphism(&h, &map));
        assert_eq!(fingerprint(&g), fingerprint(&h));
    }

    #[test]
    fn regular_non_isomorphic() {
        // C6 versus two triangles: same degrees, refinement alone cannot split.
        let c6 = ZdGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let tt = ZdGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!iso(&c6, &tt));
    }

    #[test]
    fn fingerprints_separate_cliques() {
        assert_ne!(fingerprint(&ZdGraph::complete(3)), fingerprint(&ZdGraph::complete(4)));
        assert_eq!(fingerprint(&ZdGraph::complete(3)), fingerprint(&ZdGraph::complete(3).permuted(&[2, 0, 1]).unwrap()));
    }

    #[test]
    fn cap() {
        let big = ZdGraph::empty(ISO_CAP + 1);
        assert!(graphs_isomorphic(&big, &big).is_err());
    }

    #[test]
    fn blowup_matches_expansion() {
        let cls = |mult, clique| BlowupClass { mult, clique };
        let cases = [
            BlowupGraph::new(2, vec![cls(3, true), cls(2, false), cls(1, true)], &[(0, 1)]).unwrap(),
            BlowupGraph::new(0, vec![cls(1, true), cls(1, true), cls(2, false)], &[(0, 2), (1, 2)]).unwrap(),
            BlowupGraph::new(1, vec![cls(1, false), cls(2, false)], &[]).unwrap(),
            BlowupGraph::new(0, vec![cls(1, true); 4], &[(0, 1), (2, 3)]).unwrap(),
            // a clique class sharing its neighborhood with independent ones
            BlowupGraph::new(0, vec![cls(1, false), cls(2, true), cls(1, false)], &[]).unwrap(),
        ];
        for b in &cases {
            let g = expand(b, 100).unwrap();
            assert_eq!(fingerprint_blowup(b), fingerprint(&g));
        }
        for a in &cases {
            for b in &cases {
                let ea = expand(a, 100).unwrap();
                let eb = expand(b, 100).unwrap();
                assert_eq!(blowup_isomorphic(a, b), iso(&ea, &eb));
            }
        }
    }
}
