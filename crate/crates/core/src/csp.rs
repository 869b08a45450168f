//! Neighborhood and edge constraint problems, and the reduction between them.
//!
//! An [`HlcspInstance`] restricts, for every vertex `v`, the coloring of its
//! closed neighborhood `N(v)` to an explicit list of tuples. An
//! [`HecspInstance`] restricts only the color pairs on edges. The reduction
//! recolors each vertex with the index of its chosen neighborhood tuple and
//! allows a pair of indices on an edge iff the two tuples agree on the shared
//! part of the neighborhoods. Solutions correspond one to one.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tessellation::HypGraph;

/// An ordered set of distinct color labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorSet {
    names: Vec<String>,
}

impl ColorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidInstance("color set is empty".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidInstance(format!("duplicate color label {a:?}")));
            }
        }
        Ok(ColorSet { names })
    }

    /// Colors labelled `"0"`, `"1"`, … .
    pub fn numbered(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A total assignment of color indices to vertex ids `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<usize>);

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring(colors)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// `N(v)`: `v` first, then its neighbors in ascending id order.
pub fn neighborhood(g: &HypGraph, v: usize) -> Result<Vec<usize>> {
    if v >= g.len() {
        return Err(Error::UnknownVertex(v));
    }
    let mut out = Vec::with_capacity(g.degree(v) + 1);
    out.push(v);
    out.extend_from_slice(g.neighbors(v));
    Ok(out)
}

/// The allowed colorings `m(v)` of one closed neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexConstraint {
    neighborhood: Vec<usize>,
    allowed: Vec<Vec<usize>>,
}

impl VertexConstraint {
    pub fn neighborhood(&self) -> &[usize] {
        &self.neighborhood
    }

    /// Allowed tuples in lexicographic order; entry `i` colors `neighborhood()[i]`.
    pub fn allowed(&self) -> &[Vec<usize>] {
        &self.allowed
    }

    pub fn allows(&self, tuple: &[usize]) -> bool {
        self.allowed.binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok()
    }
}

/// A neighborhood-constrained coloring problem.
#[derive(Debug, Clone, PartialEq)]
pub struct HlcspInstance {
    graph: HypGraph,
    colors: ColorSet,
    constraints: Vec<VertexConstraint>,
}

impl HlcspInstance {
    /// Builds an instance from explicit tuple lists, one per vertex.
    ///
    /// Tuples are sorted lexicographically; duplicates, wrong arities and
    /// out-of-range colors are rejected.
    pub fn new(graph: HypGraph, colors: ColorSet, allowed: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if allowed.len() != graph.len() {
            return Err(Error::InvalidInstance(format!(
                "{} constraint lists for {} vertices",
                allowed.len(),
                graph.len()
            )));
        }
        let k = colors.len();
        let mut constraints = Vec::with_capacity(graph.len());
        for (v, mut tuples) in allowed.into_iter().enumerate() {
            let nb = neighborhood(&graph, v)?;
            for t in &tuples {
                if t.len() != nb.len() {
                    return Err(Error::InvalidInstance(format!(
                        "tuple of length {} at vertex {v} with |N(v)| = {}",
                        t.len(),
                        nb.len()
                    )));
                }
                if let Some(c) = t.iter().find(|&&c| c >= k) {
                    return Err(Error::InvalidInstance(format!("color {c} out of range at vertex {v}")));
                }
            }
            tuples.sort_unstable();
            if tuples.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInstance(format!("duplicate tuple at vertex {v}")));
            }
            constraints.push(VertexConstraint { neighborhood: nb, allowed: tuples });
        }
        Ok(HlcspInstance { graph, colors, constraints })
    }

    /// Builds `m(v)` by filtering all of `K^{N(v)}` with `keep(v, N(v), tuple)`.
    pub fn from_predicate(
        graph: HypGraph,
        colors: ColorSet,
        mut keep: impl FnMut(usize, &[usize], &[usize]) -> bool,
    ) -> Result<Self> {
        let k = colors.len();
        let mut allowed = Vec::with_capacity(graph.len());
        for v in 0..graph.len() {
            let nb = neighborhood(&graph, v)?;
            allowed.push(all_tuples(k, nb.len()).filter(|t| keep(v, &nb, t)).collect());
        }
        Self::new(graph, colors, allowed)
    }

    pub fn graph(&self) -> &HypGraph {
        &self.graph
    }

    pub fn colors(&self) -> &ColorSet {
        &self.colors
    }

    pub fn constraint(&self, v: usize) -> &VertexConstraint {
        &self.constraints[v]
    }

    pub fn constraints(&self) -> &[VertexConstraint] {
        &self.constraints
    }

    /// Largest `|m(v)|`, the number of colors after reduction.
    pub fn max_allowed(&self) -> usize {
        self.constraints.iter().map(|c| c.allowed.len()).max().unwrap_or(0)
    }
}

/// All tuples of length `len` over `0..k` in lexicographic order.
pub fn all_tuples(k: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if k == 0 && len > 0 { 0 } else { k.pow(len as u32) };
    (0..total).map(move |mut idx| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = idx % k;
            idx /= k;
        }
        t
    })
}

/// A `k × k` boolean matrix over color pairs of one edge, rows indexed by the
/// lower-id endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    k: usize,
    bits: Vec<u64>,
}

impl PairTable {
    pub fn forbidding_all(k: usize) -> Self {
        PairTable { k, bits: vec![0; (k * k).div_ceil(64)] }
    }

    pub fn from_fn(k: usize, mut allow: impl FnMut(usize, usize) -> bool) -> Self {
        let mut t = Self::forbidding_all(k);
        for i in 0..k {
            for j in 0..k {
                if allow(i, j) {
                    t.set(i, j);
                }
            }
        }
        t
    }

    pub fn set(&mut self, lo: usize, hi: usize) {
        let idx = lo * self.k + hi;
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    #[inline]
    pub fn allows(&self, lo: usize, hi: usize) -> bool {
        if lo >= self.k || hi >= self.k {
            return false;
        }
        let idx = lo * self.k + hi;
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn count_allowed(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// An edge-constrained coloring problem over colors `0..k`.
///
/// `admissible[v]` bounds the colors vertex `v` may take; it equals `k`
/// except for vertices padded by the reduction, and keeps isolated vertices
/// correct since they have no edge tables to carry the restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct HecspInstance {
    graph: HypGraph,
    num_colors: usize,
    admissible: Vec<usize>,
    tables: Vec<PairTable>,
}

impl HecspInstance {
    /// `tables[i]` constrains `graph.edges()[i]`.
    pub fn new(graph: HypGraph, num_colors: usize, admissible: Vec<usize>, tables: Vec<PairTable>) -> Result<Self> {
        if admissible.len() != graph.len() {
            return Err(Error::InvalidInstance("admissible counts do not cover every vertex".into()));
        }
        if let Some(v) = admissible.iter().position(|&a| a > num_colors) {
            return Err(Error::InvalidInstance(format!("vertex {v} admits more than {num_colors} colors")));
        }
        if tables.len() != graph.edges().len() {
            return Err(Error::InvalidInstance(format!(
                "{} pair tables for {} edges",
                tables.len(),
                graph.edges().len()
            )));
        }
        if tables.iter().any(|t| t.dim() != num_colors) {
            return Err(Error::InvalidInstance("pair table dimension differs from the color count".into()));
        }
        Ok(HecspInstance { graph, num_colors, admissible, tables })
    }

    /// Every vertex admits all colors; edge tables from `allow(edge, lo_color, hi_color)`.
    pub fn from_fn(
        graph: HypGraph,
        num_colors: usize,
        mut allow: impl FnMut((usize, usize), usize, usize) -> bool,
    ) -> Self {
        let tables = graph.edges().iter().map(|&e| PairTable::from_fn(num_colors, |i, j| allow(e, i, j))).collect();
        let admissible = vec![num_colors; graph.len()];
        HecspInstance { graph, num_colors, admissible, tables }
    }

    pub fn graph(&self) -> &HypGraph {
        &self.graph
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn admissible(&self, v: usize) -> usize {
        self.admissible[v]
    }

    pub fn admissible_counts(&self) -> &[usize] {
        &self.admissible
    }

    pub fn tables(&self) -> &[PairTable] {
        &self.tables
    }

    pub fn table(&self, edge_index: usize) -> &PairTable {
        &self.tables[edge_index]
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.graph.edges().binary_search(&(u.min(v), u.max(v))).ok()
    }
}

/// Per-vertex tuple lists used to translate reduced colors back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeMap {
    neighborhoods: Vec<Vec<usize>>,
    tuples: Vec<Vec<Vec<usize>>>,
}

impl DecodeMap {
    /// The tuple that reduced color `j` stands for at vertex `v`.
    pub fn tuple(&self, v: usize, j: usize) -> Option<&[usize]> {
        self.tuples.get(v)?.get(j).map(Vec::as_slice)
    }
}

/// Reduces a neighborhood-constrained instance to an edge-constrained one.
///
/// The reduced color set is `0..k` with `k = max |m(v)|`; color `j` at `v`
/// means "the neighborhood of `v` is colored by the `j`-th tuple of `m(v)`".
/// Indices `≥ |m(v)|` are forbidden at `v` by the edge tables and the
/// admissible counts.
pub fn reduce_to_hecsp(inst: &HlcspInstance) -> (HecspInstance, DecodeMap) {
    let views = inst.constraints.iter().map(|c| (c.neighborhood.clone(), c.allowed.clone())).collect();
    reduce_views(inst.graph(), views)
}

/// Like [`reduce_to_hecsp`], but a vertex whose constraint allows every tuple
/// is reduced to its own color instead of a tuple over its neighborhood.
///
/// Solutions stay in bijection with the original ones: every neighbor slot of
/// a constrained vertex is tied by an edge to the neighbor's own color. Boards
/// with many unconstrained cells get far smaller tables this way.
pub fn reduce_to_hecsp_compact(inst: &HlcspInstance) -> (HecspInstance, DecodeMap) {
    let k = inst.colors.len();
    let views = inst
        .constraints
        .iter()
        .enumerate()
        .map(|(v, c)| {
            let full = u32::try_from(c.neighborhood.len())
                .ok()
                .and_then(|len| k.checked_pow(len))
                .is_some_and(|total| total == c.allowed.len());
            if full {
                (vec![v], (0..k).map(|x| vec![x]).collect())
            } else {
                (c.neighborhood.clone(), c.allowed.clone())
            }
        })
        .collect();
    reduce_views(inst.graph(), views)
}

fn reduce_views(g: &HypGraph, views: Vec<(Vec<usize>, Vec<Vec<usize>>)>) -> (HecspInstance, DecodeMap) {
    let k = views.iter().map(|(_, allowed)| allowed.len()).max().unwrap_or(0);
    let mut tables = Vec::with_capacity(g.edges().len());
    for &(u, v) in g.edges() {
        let (nu, au) = &views[u];
        let (nv, av) = &views[v];
        let shared: Vec<(usize, usize)> =
            nu.iter().enumerate().filter_map(|(i, w)| nv.iter().position(|x| x == w).map(|j| (i, j))).collect();
        let mut by_projection: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (j, t) in av.iter().enumerate() {
            by_projection.entry(shared.iter().map(|&(_, pos)| t[pos]).collect()).or_default().push(j);
        }
        let mut table = PairTable::forbidding_all(k);
        for (i, t) in au.iter().enumerate() {
            let key: Vec<usize> = shared.iter().map(|&(pos, _)| t[pos]).collect();
            if let Some(js) = by_projection.get(&key) {
                for &j in js {
                    table.set(i, j);
                }
            }
        }
        tables.push(table);
    }
    let admissible = views.iter().map(|(_, allowed)| allowed.len()).collect();
    let hecsp = HecspInstance { graph: g.clone(), num_colors: k, admissible, tables };
    let (neighborhoods, tuples) = views.into_iter().unzip();
    (hecsp, DecodeMap { neighborhoods, tuples })
}

/// Translates a reduced solution back to the original colors.
///
/// Fails with [`Error::InvalidColoring`] unless every chosen tuple exists and
/// overlapping tuples agree, i.e. unless `sol` solves the reduced instance.
pub fn decode(sol: &Coloring, dm: &DecodeMap) -> Result<Coloring> {
    let n = dm.tuples.len();
    if sol.len() != n {
        return Err(Error::InvalidColoring);
    }
    let mut chosen = Vec::with_capacity(n);
    for v in 0..n {
        chosen.push(dm.tuple(v, sol.get(v)).ok_or(Error::InvalidColoring)?);
    }
    // The tuple of v colors v itself in slot 0.
    let colors: Vec<usize> = chosen.iter().map(|t| t[0]).collect();
    for v in 0..n {
        for (slot, &w) in dm.neighborhoods[v].iter().enumerate() {
            if chosen[v][slot] != colors[w] {
                return Err(Error::InvalidColoring);
            }
        }
    }
    Ok(Coloring(colors))
}

/// Every neighborhood restriction of `c` is an allowed tuple.
pub fn check_hlcsp(inst: &HlcspInstance, c: &Coloring) -> bool {
    if c.len() != inst.graph.len() || c.0.iter().any(|&x| x >= inst.colors.len()) {
        return false;
    }
    let mut buf = Vec::new();
    inst.constraints.iter().all(|con| {
        buf.clear();
        buf.extend(con.neighborhood.iter().map(|&w| c.0[w]));
        con.allows(&buf)
    })
}

/// Every vertex color is admissible and every edge pair is allowed.
pub fn check_hecsp(inst: &HecspInstance, c: &Coloring) -> bool {
    if c.len() != inst.graph.len() {
        return false;
    }
    if c.0.iter().zip(&inst.admissible).any(|(&x, &a)| x >= a) {
        return false;
    }
    inst.graph.edges().iter().zip(&inst.tables).all(|(&(u, v), t)| t.allows(c.0[u], c.0[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HypPoint;
    use crate::tessellation::{generate_tiling, Params, TilingSpec};

    fn path_graph(n: usize) -> HypGraph {
        let pts = (0..n).map(|i| HypPoint::from_polar(i as f64, 0.0)).collect();
        HypGraph::new(pts, (1..n).map(|i| (i - 1, i)), Params { r: 0.5, d: 1.5 }).unwrap()
    }

    #[test]
    fn neighborhoods() {
        let g = path_graph(1);
        assert_eq!(neighborhood(&g, 0).unwrap(), vec![0]);
        assert!(matches!(neighborhood(&g, 1), Err(Error::UnknownVertex(1))));
        let t = generate_tiling(&TilingSpec::new(7, 3, 1)).unwrap();
        assert_eq!(neighborhood(&t, 0).unwrap().len(), 8);
        for v in 0..t.len() {
            assert_eq!(neighborhood(&t, v).unwrap().len() - 1, t.degree(v));
        }
        let g = path_graph(4);
        assert_eq!(neighborhood(&g, 2).unwrap(), vec![2, 1, 3]);
    }

    #[test]
    fn color_set_rules() {
        assert!(ColorSet::new(Vec::<String>::new()).is_err());
        assert!(ColorSet::new(["a", "a"]).is_err());
        let c = ColorSet::new(["x", "y"]).unwrap();
        assert_eq!(c.index_of("y"), Some(1));
    }

    #[test]
    fn instance_validation() {
        let g = path_graph(2);
        let k2 = ColorSet::numbered(2).unwrap();
        assert!(HlcspInstance::new(g.clone(), k2.clone(), vec![vec![vec![0]], vec![]]).is_err());
        assert!(HlcspInstance::new(g.clone(), k2.clone(), vec![vec![vec![0, 2]], vec![]]).is_err());
        assert!(HlcspInstance::new(g.clone(), k2.clone(), vec![vec![vec![0, 1], vec![0, 1]], vec![]]).is_err());
        let inst = HlcspInstance::new(g, k2, vec![vec![vec![1, 0], vec![0, 1]], vec![]]).unwrap();
        assert_eq!(inst.constraint(0).allowed(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn singleton_constraints_reduce_to_one_color() {
        // Path 0-1-2 colored 1,0,1.
        let g = path_graph(3);
        let target = [1, 0, 1];
        let inst = HlcspInstance::from_predicate(g, ColorSet::numbered(2).unwrap(), |_, nb, t| {
            nb.iter().zip(t).all(|(&w, &c)| target[w] == c)
        })
        .unwrap();
        let (h, dm) = reduce_to_hecsp(&inst);
        assert_eq!(h.num_colors(), 1);
        assert!(h.tables().iter().all(|t| t.allows(0, 0)));
        let sol = Coloring::new(vec![0, 0, 0]);
        assert!(check_hecsp(&h, &sol));
        let decoded = decode(&sol, &dm).unwrap();
        assert_eq!(decoded.as_slice(), &target);
        assert!(check_hlcsp(&inst, &decoded));
    }

    #[test]
    fn empty_constraint_makes_reduction_unsatisfiable() {
        let g = path_graph(2);
        let inst = HlcspInstance::from_predicate(g, ColorSet::numbered(2).unwrap(), |v, _, _| v != 1).unwrap();
        let (h, _) = reduce_to_hecsp(&inst);
        assert_eq!(h.admissible(1), 0);
        assert_eq!(h.table(0).count_allowed(), 0);

        // Isolated vertex with nothing allowed.
        let iso = HypGraph::new(vec![HypPoint::ORIGIN], [], Params { r: 0.5, d: 1.0 }).unwrap();
        let inst = HlcspInstance::new(iso, ColorSet::numbered(2).unwrap(), vec![vec![]]).unwrap();
        let (h, _) = reduce_to_hecsp(&inst);
        assert_eq!(h.admissible(0), 0);
        assert!(!check_hecsp(&h, &Coloring::new(vec![0])));
    }

    #[test]
    fn checks() {
        let pts = (0..3).map(|i| HypPoint::from_polar(2.0 * i as f64, 0.0)).collect();
        let g = HypGraph::new(pts, [], Params { r: 0.5, d: 1.0 }).unwrap();
        let full = HlcspInstance::from_predicate(g.clone(), ColorSet::numbered(3).unwrap(), |_, _, _| true).unwrap();
        for c in all_tuples(3, 3) {
            assert!(check_hlcsp(&full, &Coloring::new(c)));
        }
        let one = HypGraph::new(vec![HypPoint::ORIGIN], [], Params { r: 0.5, d: 1.0 }).unwrap();
        let no_zero = HlcspInstance::from_predicate(one, ColorSet::numbered(2).unwrap(), |_, _, t| t[0] != 0).unwrap();
        assert!(!check_hlcsp(&no_zero, &Coloring::new(vec![0])));
        assert!(check_hlcsp(&no_zero, &Coloring::new(vec![1])));
        assert!(!check_hlcsp(&no_zero, &Coloring::new(vec![2])));
    }

    #[test]
    fn decode_rejects_inconsistent_choices() {
        let g = path_graph(2);
        let inst = HlcspInstance::from_predicate(g, ColorSet::numbered(2).unwrap(), |_, _, _| true).unwrap();
        let (h, dm) = reduce_to_hecsp(&inst);
        // Tuple 1 at vertex 0 is (0, 1); tuple 0 at vertex 1 is (0, 0): they disagree on vertex 1.
        let bad = Coloring::new(vec![1, 0]);
        assert!(!check_hecsp(&h, &bad));
        assert!(matches!(decode(&bad, &dm), Err(Error::InvalidColoring)));
        assert!(matches!(decode(&Coloring::new(vec![9, 0]), &dm), Err(Error::InvalidColoring)));
    }

    #[test]
    fn lexicographic_tuples() {
        let all: Vec<Vec<usize>> = all_tuples(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_tuples(3, 0).count(), 1);
    }
}
