//! Embedded graphs and bounded regular `{p,q}` tessellations.
//!
//! A [`HypGraph`] is a graph whose vertices carry positions in the
//! hyperbolic plane together with the `(r, d)` parameters it claims to
//! satisfy. [`generate_tiling`] builds the cell-adjacency graph of a disk of
//! tiles; [`validate_embedding`] checks the three embedding conditions by
//! brute force.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{self, dist, point_segment_distance, segments_cross, HypPoint, Isometry, Segment};

/// Largest accepted ring count for [`generate_tiling`].
pub const RING_CAP: usize = 8;

/// Quantization step for tile-center deduplication.
const DEDUP_QUANTUM: f64 = 1e-6;

/// The `(r, d)` parameters of an embedded graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Lower bound on the distance between any two vertices.
    pub r: f64,
    /// Upper bound on edge length.
    pub d: f64,
}

/// A graph embedded in the hyperbolic plane.
///
/// Vertex ids are dense `0..n`. Edges are stored as `(lo, hi)` pairs, sorted,
/// without loops or duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct HypGraph {
    positions: Vec<HypPoint>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    params: Params,
}

impl HypGraph {
    pub fn new(
        positions: Vec<HypPoint>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        params: Params,
    ) -> Result<Self> {
        let n = positions.len();
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) references a vertex outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(HypGraph { positions, edges: normalized, adjacency, params })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn positions(&self) -> &[HypPoint] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &HypPoint {
        &self.positions[v]
    }

    /// Neighbors of `v` in ascending id order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }

    /// Deletes `removed` together with incident edges and renumbers the
    /// surviving vertices densely, preserving their relative order.
    pub fn remove_vertices(&self, removed: &BTreeSet<usize>) -> HypGraph {
        let mut new_id = vec![usize::MAX; self.len()];
        let mut positions = Vec::new();
        for (v, p) in self.positions.iter().enumerate() {
            if !removed.contains(&v) {
                new_id[v] = positions.len();
                positions.push(*p);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| new_id[*u] != usize::MAX && new_id[*v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]));
        HypGraph::new(positions, edges, self.params).expect("subgraph of a valid graph is valid")
    }
}

/// Parameters of a bounded `{p,q}` tiling: regular `p`-gons, `q` around each corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingSpec {
    pub p: usize,
    pub q: usize,
    /// Tile-adjacency radius around the central tile.
    pub rings: usize,
    /// Tile ids (in the unpruned tiling) to delete after generation.
    pub removed: BTreeSet<usize>,
}

impl TilingSpec {
    pub fn new(p: usize, q: usize, rings: usize) -> Self {
        TilingSpec { p, q, rings, removed: BTreeSet::new() }
    }

    pub fn with_removed(mut self, removed: impl IntoIterator<Item = usize>) -> Self {
        self.removed = removed.into_iter().collect();
        self
    }

    pub fn check(&self) -> Result<()> {
        check_hyperbolic(self.p, self.q)?;
        if self.rings > RING_CAP {
            return Err(Error::TooManyRings { rings: self.rings, cap: RING_CAP });
        }
        Ok(())
    }
}

/// `(p − 2)(q − 2) > 4`.
pub fn is_hyperbolic(p: usize, q: usize) -> bool {
    p >= 3 && q >= 3 && (p - 2) * (q - 2) > 4
}

fn check_hyperbolic(p: usize, q: usize) -> Result<()> {
    if is_hyperbolic(p, q) {
        Ok(())
    } else {
        Err(Error::NotHyperbolic { p, q })
    }
}

/// Concrete embedding parameters derived from the tile geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalParams {
    pub r: f64,
    pub d: f64,
    /// Side length of a tile.
    pub edge_len: f64,
    /// Distance between centers of adjacent tiles.
    pub spacing: f64,
}

impl NaturalParams {
    pub fn params(&self) -> Params {
        Params { r: self.r, d: self.d }
    }
}

/// Edge length, center spacing, and `(r, d) = (0.9·spacing, 1.1·spacing)` for `{p,q}`.
pub fn natural_params(p: usize, q: usize) -> Result<NaturalParams> {
    check_hyperbolic(p, q)?;
    let (pp, qq) = (PI / p as f64, PI / q as f64);
    let edge_len = 2.0 * (pp.cos() / qq.sin()).acosh();
    let spacing = 2.0 * (qq.cos() / pp.sin()).acosh();
    Ok(NaturalParams { r: 0.9 * spacing, d: 1.1 * spacing, edge_len, spacing })
}

/// Circumradius of a `{p,q}` tile: `cosh R = cot(π/p)·cot(π/q)`.
pub fn tile_circumradius(p: usize, q: usize) -> Result<f64> {
    check_hyperbolic(p, q)?;
    let (pp, qq) = (PI / p as f64, PI / q as f64);
    Ok((1.0 / (pp.tan() * qq.tan())).acosh())
}

/// `⌊area(d + r/2) / area(r/2)⌋`, a bound on closed-neighborhood size.
pub fn degree_bound(r: f64, d: f64) -> Result<usize> {
    if !(r > 0.0 && d > 0.0) {
        return Err(Error::InvalidGraph(format!("degree bound needs positive r and d, got r = {r}, d = {d}")));
    }
    let ratio = geometry::disk_area(d + r / 2.0)? / geometry::disk_area(r / 2.0)?;
    Ok(ratio.floor() as usize)
}

struct CenterIndex {
    buckets: HashMap<(i64, i64), Vec<usize>>,
    radius: f64,
}

impl CenterIndex {
    fn key(p: &HypPoint) -> (i64, i64) {
        ((p.x() / DEDUP_QUANTUM).round() as i64, (p.y() / DEDUP_QUANTUM).round() as i64)
    }

    fn find(&self, p: &HypPoint, centers: &[HypPoint]) -> Option<usize> {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if let Some(&id) = ids.iter().find(|&&id| dist(&centers[id], p) < self.radius) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: &HypPoint, id: usize) {
        self.buckets.entry(Self::key(p)).or_default().push(id);
    }
}

/// Generates the tile-adjacency graph of all tiles within `rings` steps of a
/// central tile centered at the origin.
///
/// Tiles are numbered in breadth-first order; the central tile is 0 and its
/// neighbors lie in directions `2πk/p`. Tiles listed in `spec.removed` are
/// deleted afterwards and the rest renumbered densely.
pub fn generate_tiling(spec: &TilingSpec) -> Result<HypGraph> {
    spec.check()?;
    let nat = natural_params(spec.p, spec.q)?;
    let p = spec.p;
    let step: Vec<Isometry> = (0..p)
        .map(|k| {
            Isometry::rotation(2.0 * PI * k as f64 / p as f64)
                .compose(&Isometry::translation_x(nat.spacing))
                .compose(&Isometry::rotation(PI))
        })
        .collect();

    let mut frames = vec![Isometry::IDENTITY];
    let mut centers = vec![HypPoint::ORIGIN];
    let mut index = CenterIndex { buckets: HashMap::new(), radius: nat.spacing / 2.0 };
    index.insert(&HypPoint::ORIGIN, 0);

    let mut frontier = vec![0usize];
    for _ in 0..spec.rings {
        let mut next = Vec::new();
        for &t in &frontier {
            for s in &step {
                let frame = frames[t].compose(s);
                let c = frame.apply(&HypPoint::ORIGIN);
                if index.find(&c, &centers).is_none() {
                    let id = centers.len();
                    index.insert(&c, id);
                    centers.push(c);
                    frames.push(frame);
                    next.push(id);
                }
            }
        }
        frontier = next;
    }

    let mut edges = Vec::new();
    for t in 0..centers.len() {
        for s in &step {
            let c = frames[t].compose(s).apply(&HypPoint::ORIGIN);
            if let Some(u) = index.find(&c, &centers) {
                if u > t {
                    edges.push((t, u));
                }
            }
        }
    }
    let graph = HypGraph::new(centers, edges, nat.params())?;
    if spec.removed.is_empty() {
        Ok(graph)
    } else {
        Ok(graph.remove_vertices(&spec.removed))
    }
}

/// One failed embedding condition with the measured quantity.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingViolation {
    /// Two distinct vertices at distance `≤ r`.
    VerticesTooClose { u: usize, v: usize, distance: f64 },
    /// An edge of length `≥ d`.
    EdgeTooLong { u: usize, v: usize, length: f64 },
    /// Drawings of two edges without a common endpoint cross.
    EdgesCross { first: (usize, usize), second: (usize, usize) },
    /// An edge passes closer than `r/2` to a vertex other than its endpoints.
    EdgeNearVertex { edge: (usize, usize), vertex: usize, distance: f64 },
}

/// Result of [`validate_embedding`]: every violation found.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingReport {
    pub violations: Vec<EmbeddingViolation>,
}

impl EmbeddingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks all three embedding conditions by exhaustive pairwise comparison.
///
/// Pairs that a triangle-inequality bound proves safe are skipped without
/// running the geometric predicate.
pub fn validate_embedding(g: &HypGraph) -> EmbeddingReport {
    let Params { r, d } = g.params();
    let pos = g.positions();
    let mut violations = Vec::new();

    for u in 0..g.len() {
        for v in u + 1..g.len() {
            let distance = dist(&pos[u], &pos[v]);
            if distance <= r {
                violations.push(EmbeddingViolation::VerticesTooClose { u, v, distance });
            }
        }
    }

    let mut segments = Vec::with_capacity(g.edges().len());
    for &(u, v) in g.edges() {
        let length = dist(&pos[u], &pos[v]);
        if length >= d {
            violations.push(EmbeddingViolation::EdgeTooLong { u, v, length });
        }
        segments.push(Segment::new(pos[u], pos[v]).ok().map(|s| (s, length)));
    }

    let edges = g.edges();
    for i in 0..edges.len() {
        let Some((si, li)) = segments[i] else { continue };
        for j in i + 1..edges.len() {
            let (a, b) = (edges[i], edges[j]);
            if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
                continue;
            }
            let Some((sj, lj)) = segments[j] else { continue };
            if dist(&si.a, &sj.a) > li + lj {
                continue;
            }
            if segments_cross(&si, &sj) {
                violations.push(EmbeddingViolation::EdgesCross { first: a, second: b });
            }
        }
        for w in 0..g.len() {
            if w == edges[i].0 || w == edges[i].1 {
                continue;
            }
            if dist(&pos[w], &si.a) - li >= r / 2.0 {
                continue;
            }
            let distance = point_segment_distance(&pos[w], &si);
            if distance < r / 2.0 {
                violations.push(EmbeddingViolation::EdgeNearVertex { edge: edges[i], vertex: w, distance });
            }
        }
    }
    EmbeddingReport { violations }
}
