//! Tree decompositions: a randomized min-fill builder, a strict validator, and
//! normalization to the Leaf / Introduce / Forget / Join nice form consumed by
//! the dynamic program.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::tessellation::{generate_tiling, HypGraph, TilingSpec};

/// Default number of randomized min-fill runs.
pub const DEFAULT_SEEDS: u64 = 16;

/// Environment variable overriding [`DEFAULT_SEEDS`].
pub const SEEDS_ENV: &str = "HYPCSP_SEEDS";

/// The seed count from `HYPCSP_SEEDS` if set to a positive integer, else the default.
pub fn default_seeds() -> u64 {
    std::env::var(SEEDS_ENV).ok().and_then(|s| s.trim().parse::<u64>().ok()).filter(|&n| n > 0).unwrap_or(DEFAULT_SEEDS)
}

/// A tree of bags over the vertices of a graph.
///
/// Bags are kept sorted and free of duplicates. The tree is given by an
/// undirected edge list and a designated root bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
    root: usize,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>, root: usize) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges, root }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (0 when every bag is empty).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// One way a decomposition fails to be valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    /// The bags and tree edges do not form a tree, or the root is missing.
    NotATree(String),
    /// A bag names a vertex the graph does not have.
    UnknownVertex { bag: usize, vertex: usize },
    /// No bag contains the vertex.
    VertexUncovered(usize),
    /// No bag contains both endpoints.
    EdgeUncovered(usize, usize),
    /// The bags containing the vertex split into several subtrees.
    Disconnected { vertex: usize, components: usize },
    /// A nice-form node fits none of the four node shapes.
    BadNode { node: usize, reason: String },
    /// A nice-form root bag holds more than one vertex.
    RootTooLarge(usize),
    /// The two branches of a join share a vertex below the join, or one adds nothing.
    JoinOverlap { node: usize },
    /// An edge is checked at the wrong place or not exactly once.
    EdgeCheck { edge: (usize, usize), reason: String },
}

/// Every violation found by a validator; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violations: Vec<DecompositionViolation>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks coverage, edge coverage, connectivity, and that the bags form a tree.
pub fn validate_decomposition(g: &HypGraph, t: &TreeDecomposition) -> DecompositionReport {
    use DecompositionViolation::*;
    let mut violations = Vec::new();
    let nb = t.bags.len();

    let mut tree_ok = true;
    if nb == 0 || t.root >= nb {
        violations.push(NotATree(format!("root {} outside {} bags", t.root, nb)));
        tree_ok = false;
    }
    if t.tree_edges.len() + 1 != nb.max(1) {
        violations.push(NotATree(format!("{} tree edges for {} bags", t.tree_edges.len(), nb)));
        tree_ok = false;
    }
    let mut parent: Vec<usize> = (0..nb).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &t.tree_edges {
        if a >= nb || b >= nb || a == b {
            violations.push(NotATree(format!("tree edge ({a}, {b}) is invalid")));
            tree_ok = false;
            continue;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            violations.push(NotATree(format!("tree edge ({a}, {b}) closes a cycle")));
            tree_ok = false;
        } else {
            parent[ra] = rb;
        }
    }

    let n = g.len();
    let mut occurrences = vec![0usize; n];
    let mut bags_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in t.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(UnknownVertex { bag: i, vertex: v });
            } else {
                occurrences[v] += 1;
                bags_of[v].push(i);
            }
        }
    }
    for (v, &count) in occurrences.iter().enumerate() {
        if count == 0 {
            violations.push(VertexUncovered(v));
        }
    }
    for &(u, v) in g.edges() {
        let covered = bags_of[u].iter().any(|&b| t.bags[b].binary_search(&v).is_ok());
        if !covered {
            violations.push(EdgeUncovered(u, v));
        }
    }
    if tree_ok {
        // In a forest, the bags holding v induce occurrences − shared-edge components.
        let mut shared = vec![0usize; n];
        for &(a, b) in &t.tree_edges {
            for &v in &t.bags[a] {
                if v < n && t.bags[b].binary_search(&v).is_ok() {
                    shared[v] += 1;
                }
            }
        }
        for v in 0..n {
            let components = occurrences[v] - shared[v];
            if components > 1 {
                violations.push(Disconnected { vertex: v, components });
            }
        }
    }
    DecompositionReport { violations }
}

/// A min-fill elimination ordering with ties broken uniformly at random.
pub fn min_fill_ordering(g: &HypGraph, seed: u64) -> Vec<usize> {
    let n = g.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<FxHashSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let fill_of = |adj: &[FxHashSet<usize>], v: usize| -> usize {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut fill: Vec<usize> = (0..n).map(|v| fill_of(&adj, v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut ties = Vec::new();
    let mut affected = FxHashSet::default();
    for _ in 0..n {
        let best = (0..n).filter(|&v| alive[v]).map(|v| fill[v]).min().expect("a vertex remains");
        ties.clear();
        ties.extend((0..n).filter(|&v| alive[v] && fill[v] == best));
        let v = ties[rng.gen_range(0..ties.len())];
        alive[v] = false;
        order.push(v);

        let mut nbrs: Vec<usize> = adj[v].iter().copied().collect();
        nbrs.sort_unstable();
        affected.clear();
        for &a in &nbrs {
            adj[a].remove(&v);
            affected.insert(a);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    for &w in adj[a].intersection(&adj[b]) {
                        affected.insert(w);
                    }
                }
            }
        }
        adj[v].clear();
        for &w in &affected {
            fill[w] = fill_of(&adj, w);
        }
    }
    order
}

/// Turns an elimination ordering into a tree decomposition.
///
/// The bag of `v` is `v` with its neighbors at elimination time; its parent is
/// the bag of the earliest-eliminated such neighbor. Components are hung below
/// an empty root bag when there is more than one.
pub fn decomposition_from_ordering(g: &HypGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.len();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new(), 0);
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<FxHashSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = vec![Vec::new(); n];
    let mut parent = vec![None; n];
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| position[u] > position[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent[v] = later.iter().copied().min_by_key(|&u| position[u]);
        let mut bag = later;
        bag.push(v);
        bags[v] = bag;
    }
    let mut tree_edges: Vec<(usize, usize)> = (0..n).filter_map(|v| parent[v].map(|p| (p, v))).collect();
    let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
    let root = if roots.len() == 1 {
        roots[0]
    } else {
        bags.push(Vec::new());
        tree_edges.extend(roots.iter().map(|&r| (n, r)));
        n
    };
    TreeDecomposition::new(bags, tree_edges, root)
}

/// Smallest-width decomposition over min-fill runs with seeds `0..seeds`.
pub fn build_decomposition(g: &HypGraph, seeds: u64) -> TreeDecomposition {
    let seeds: Vec<u64> = (0..seeds.max(1)).collect();
    build_decomposition_with_seeds(g, &seeds)
}

/// Smallest-width decomposition over the given seeds; the first seed wins ties.
pub fn build_decomposition_with_seeds(g: &HypGraph, seeds: &[u64]) -> TreeDecomposition {
    let mut best: Option<TreeDecomposition> = None;
    for &seed in seeds {
        let td = decomposition_from_ordering(g, &min_fill_ordering(g, seed));
        if best.as_ref().is_none_or(|b| td.width() < b.width()) {
            best = Some(td);
        }
    }
    best.unwrap_or_else(|| decomposition_from_ordering(g, &(0..g.len()).collect::<Vec<_>>()))
}

/// Lowest-cost decomposition over min-fill runs with seeds `0..seeds`, where
/// the cost of a bag is the sum of its vertices' `cost` and a decomposition
/// costs its largest bag. Width breaks ties, then the earlier seed.
///
/// With `cost[v] = log2(colors of v)` this minimizes the largest possible
/// table instead of the largest bag.
pub fn build_decomposition_by_cost(g: &HypGraph, seeds: u64, cost: &[f64]) -> TreeDecomposition {
    let score = |td: &TreeDecomposition| {
        let worst = td.bags.iter().map(|b| b.iter().map(|&v| cost[v]).sum::<f64>()).fold(0.0, f64::max);
        (worst, td.width())
    };
    let mut best: Option<(TreeDecomposition, (f64, usize))> = None;
    for seed in 0..seeds.max(1) {
        let td = decomposition_from_ordering(g, &min_fill_ordering(g, seed));
        let s = score(&td);
        if best.as_ref().is_none_or(|(_, b)| s.0 < b.0 - 1e-9 || (s.0 <= b.0 + 1e-9 && s.1 < b.1)) {
            best = Some((td, s));
        }
    }
    best.expect("at least one seed").0
}

/// The four node shapes of a nice decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    /// No children; the bag is exactly this vertex.
    Leaf(usize),
    /// One child whose bag lacks this vertex.
    Introduce(usize),
    /// One child whose bag additionally holds this vertex.
    Forget(usize),
    /// Two children with bags equal to this one.
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted vertex ids.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
    /// Graph edges `(lo, hi)` whose constraint is enforced at this node.
    /// Only Introduce nodes carry checks.
    pub edge_checks: Vec<(usize, usize)>,
}

/// A rooted nice decomposition. Children always precede their parent in
/// `nodes`, so index order is a valid bottom-up evaluation order. The root
/// bag is empty; an empty graph has no nodes at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    root: Option<usize>,
    num_vertices: usize,
}

impl NiceDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &NiceNode {
        &self.nodes[i]
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// The same tree read as a plain decomposition.
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        if self.nodes.is_empty() {
            return TreeDecomposition::new(vec![Vec::new()], Vec::new(), 0);
        }
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges = self.nodes.iter().enumerate().flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c))).collect();
        TreeDecomposition::new(bags, edges, self.root.unwrap_or(0))
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children, edge_checks: Vec::new() });
        self.nodes.len() - 1
    }

    fn forget(&mut self, child: usize, v: usize) -> usize {
        let bag: Vec<usize> = self.nodes[child].bag.iter().copied().filter(|&x| x != v).collect();
        self.push(NiceKind::Forget(v), bag, vec![child])
    }

    fn introduce(&mut self, child: usize, v: usize) -> usize {
        let mut bag = self.nodes[child].bag.clone();
        let pos = bag.binary_search(&v).expect_err("introduced vertex already present");
        bag.insert(pos, v);
        self.push(NiceKind::Introduce(v), bag, vec![child])
    }

    /// Leaf on the first vertex of `bag`, then introduce the rest.
    fn chain(&mut self, bag: &[usize]) -> usize {
        let mut top = self.push(NiceKind::Leaf(bag[0]), vec![bag[0]], Vec::new());
        for &v in &bag[1..] {
            top = self.introduce(top, v);
        }
        top
    }

    /// Reshape the branch topped by bag `from` so that its top bag is `to`.
    fn adapt(&mut self, mut top: usize, to: &[usize]) -> usize {
        let from = self.nodes[top].bag.clone();
        for &v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            top = self.forget(top, v);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            top = self.introduce(top, v);
        }
        top
    }
}

/// Normalizes a valid decomposition of `g` to nice form and assigns every
/// graph edge to exactly one Introduce node.
///
/// Branches that contribute no vertex outside the parent bag are dropped, so
/// every join separates two non-empty, disjoint sets of forgotten vertices.
/// The root bag is emptied with trailing Forget nodes.
pub fn to_nice(g: &HypGraph, t: &TreeDecomposition) -> Result<NiceDecomposition> {
    let report = validate_decomposition(g, t);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidDecomposition(format!("{v:?}")));
    }
    let adj = t.adjacency();
    let nb = t.bags.len();
    let mut parent = vec![usize::MAX; nb];
    let mut order = Vec::with_capacity(nb);
    let mut queue = VecDeque::from([t.root]);
    parent[t.root] = t.root;
    while let Some(b) = queue.pop_front() {
        order.push(b);
        for &c in &adj[b] {
            if parent[c] == usize::MAX {
                parent[c] = b;
                queue.push_back(c);
            }
        }
    }

    // Whether the subtree of a bag holds a vertex outside its parent's bag.
    // Subtrees that do not are dropped entirely.
    let mut adds_new = vec![false; nb];
    for &b in order.iter().rev().filter(|&&b| b != t.root) {
        let p = &t.bags[parent[b]];
        adds_new[b] = t.bags[b].iter().any(|v| p.binary_search(v).is_err())
            || adj[b].iter().any(|&c| parent[c] == b && adds_new[c]);
    }

    let mut builder = NiceBuilder { nodes: Vec::new() };
    let mut built: Vec<Option<usize>> = vec![None; nb];
    for &b in order.iter().rev().filter(|&&b| b == t.root || adds_new[b]) {
        let bag = &t.bags[b];
        let mut branches = Vec::new();
        for &c in adj[b].iter().filter(|&&c| parent[c] == b && c != b && adds_new[c]) {
            let top = built[c].expect("a contributing child was built");
            branches.push(builder.adapt(top, bag));
        }
        built[b] = if let Some((&first, rest)) = branches.split_first() {
            let mut acc = first;
            for &other in rest {
                acc = builder.push(NiceKind::Join, bag.clone(), vec![acc, other]);
            }
            Some(acc)
        } else if !bag.is_empty() {
            Some(builder.chain(bag))
        } else {
            None
        };
    }

    let root = built[t.root].map(|top| builder.adapt(top, &[]));
    let mut nodes = builder.nodes;

    let mut assigned = FxHashSet::default();
    for node in nodes.iter_mut() {
        if let NiceKind::Introduce(v) = node.kind {
            for &u in g.neighbors(v) {
                let e = (u.min(v), u.max(v));
                if node.bag.binary_search(&u).is_ok() && assigned.insert(e) {
                    node.edge_checks.push(e);
                }
            }
        }
    }
    if assigned.len() != g.edges().len() {
        return Err(Error::InvalidDecomposition("some edge has no introduce node holding both endpoints".into()));
    }
    Ok(NiceDecomposition { nodes, root, num_vertices: g.len() })
}

/// Checks every nice-form invariant: node shapes, root size, the plain
/// decomposition conditions, join disjointness, and edge-check placement.
pub fn validate_nice(g: &HypGraph, nd: &NiceDecomposition) -> DecompositionReport {
    use DecompositionViolation::*;
    let mut report = if nd.nodes.is_empty() {
        let mut r = DecompositionReport::default();
        for v in 0..g.len() {
            r.violations.push(VertexUncovered(v));
        }
        r
    } else {
        validate_decomposition(g, &nd.as_tree_decomposition())
    };
    let violations = &mut report.violations;
    let nodes = &nd.nodes;
    let bad = |node: usize, reason: &str| BadNode { node, reason: reason.to_string() };

    for (i, node) in nodes.iter().enumerate() {
        if node.children.iter().any(|&c| c >= i) {
            violations.push(bad(i, "child does not precede its parent"));
            continue;
        }
        if !node.bag.windows(2).all(|w| w[0] < w[1]) {
            violations.push(bad(i, "bag is not sorted"));
        }
        let child_bag = |k: usize| &nodes[node.children[k]].bag;
        match (node.kind, node.children.len()) {
            (NiceKind::Leaf(v), 0) => {
                if node.bag != [v] {
                    violations.push(bad(i, "leaf bag is not its single vertex"));
                }
            }
            (NiceKind::Introduce(v), 1) => {
                let mut expected = child_bag(0).clone();
                if let Err(pos) = expected.binary_search(&v) {
                    expected.insert(pos, v);
                } else {
                    violations.push(bad(i, "introduced vertex already in child bag"));
                }
                if expected != node.bag {
                    violations.push(bad(i, "introduce bag is not child bag plus vertex"));
                }
            }
            (NiceKind::Forget(v), 1) => {
                let expected: Vec<usize> = child_bag(0).iter().copied().filter(|&x| x != v).collect();
                if child_bag(0).binary_search(&v).is_err() || expected != node.bag {
                    violations.push(bad(i, "forget bag is not child bag minus vertex"));
                }
            }
            (NiceKind::Join, 2) => {
                if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                    violations.push(bad(i, "join children bags differ from the join bag"));
                }
            }
            _ => violations.push(bad(i, "wrong number of children for node kind")),
        }
        if !matches!(node.kind, NiceKind::Introduce(_)) && !node.edge_checks.is_empty() {
            violations.push(bad(i, "edge checks on a non-introduce node"));
        }
    }
    if let Some(r) = nd.root {
        if nodes[r].bag.len() > 1 {
            violations.push(RootTooLarge(r));
        }
        if nodes.iter().enumerate().any(|(i, _)| i > r) {
            violations.push(bad(r, "root is not the last node"));
        }
    }

    // Vertices forgotten inside each subtree, as bitsets.
    let words = g.len().div_ceil(64).max(1);
    let mut below: Vec<Vec<u64>> = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        let mut set = vec![0u64; words];
        for &c in &node.children {
            if c < i {
                for (s, w) in set.iter_mut().zip(&below[c]) {
                    *s |= w;
                }
            }
        }
        if let NiceKind::Forget(v) = node.kind {
            if v < g.len() {
                set[v / 64] |= 1 << (v % 64);
            }
        }
        if node.kind == NiceKind::Join && node.children.len() == 2 && node.children.iter().all(|&c| c < i) {
            let (l, r) = (&below[node.children[0]], &below[node.children[1]]);
            let overlap = l.iter().zip(r).any(|(a, b)| a & b != 0);
            let empty = l.iter().all(|&a| a == 0) || r.iter().all(|&b| b == 0);
            if overlap || empty {
                violations.push(JoinOverlap { node: i });
            }
        }
        below.push(set);
    }

    let mut seen = FxHashSet::default();
    for node in nodes {
        for &(u, v) in &node.edge_checks {
            let edge = (u, v);
            if !g.has_edge(u, v) || u > v {
                violations.push(EdgeCheck { edge, reason: "not a graph edge".into() });
                continue;
            }
            let here = match node.kind {
                NiceKind::Introduce(x) => x == u || x == v,
                _ => false,
            };
            let both = node.bag.binary_search(&u).is_ok() && node.bag.binary_search(&v).is_ok();
            if !here || !both {
                violations.push(EdgeCheck { edge, reason: "checked where neither endpoint is introduced".into() });
            }
            if !seen.insert(edge) {
                violations.push(EdgeCheck { edge, reason: "checked more than once".into() });
            }
        }
    }
    for &e in g.edges() {
        if !seen.contains(&e) {
            violations.push(EdgeCheck { edge: e, reason: "never checked".into() });
        }
    }
    report
}

/// `(|V|, width)` of the best min-fill decomposition for each tiling.
pub fn width_profile(specs: &[TilingSpec], seeds: u64) -> Result<Vec<(usize, usize)>> {
    specs
        .iter()
        .map(|spec| {
            let g = generate_tiling(spec)?;
            Ok((g.len(), build_decomposition(&g, seeds).width()))
        })
        .collect()
}
