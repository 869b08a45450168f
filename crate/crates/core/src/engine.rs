//! Dynamic programming over a nice decomposition: decide, count exactly,
//! extract a witness, and sample uniformly. Brute-force oracles live here too.
//!
//! Bag colorings are keyed by a mixed-radix integer: the vertex at bag
//! position `i` contributes `color · Π_{j<i} admissible(bag[j])`.

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::csp::{
    check_hlcsp, decode, reduce_to_hecsp, reduce_to_hecsp_compact, Coloring, DecodeMap, HecspInstance, HlcspInstance,
};
use crate::error::{Error, Result};
use crate::treedec::{build_decomposition_by_cost, to_nice, validate_nice, NiceDecomposition, NiceKind};

/// Largest vertex count the brute-force oracles accept.
pub const BRUTE_FORCE_LIMIT: usize = 24;

type Table = FxHashMap<u128, BigUint>;

/// Per-node tables of the counting DP.
///
/// The entry for a bag coloring counts its extensions to every vertex below
/// the node that satisfy the edge checks of the subtree. Zero counts are never
/// stored.
#[derive(Debug, Clone)]
pub struct SolutionTable {
    tables: Vec<Table>,
    /// `weights[b][i]` is the place value of bag position `i`; the extra last
    /// entry is the product of all radices.
    weights: Vec<Vec<u128>>,
    root: Option<usize>,
    retained: bool,
}

impl SolutionTable {
    /// Number of solutions.
    pub fn total(&self) -> BigUint {
        match self.root {
            None => BigUint::from(1u32),
            Some(r) => self.tables[r].get(&0).cloned().unwrap_or_default(),
        }
    }

    /// Entry count of the table at a nice node (0 once discarded).
    pub fn entries(&self, node: usize) -> usize {
        self.tables[node].len()
    }

    /// Largest table size over all nodes.
    pub fn max_entries(&self) -> usize {
        self.tables.iter().map(FxHashMap::len).max().unwrap_or(0)
    }

    /// The solution whose bag colorings have the smallest keys at every choice.
    pub fn witness(&self, nd: &NiceDecomposition) -> Option<Coloring> {
        self.trace(nd, |options| options.iter().position(|c| c.is_some()).expect("a live option"))
    }

    /// A uniformly random solution, reproducible from `seed`.
    pub fn sample(&self, nd: &NiceDecomposition, seed: u64) -> Result<Coloring> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(nd, &mut rng)
    }

    /// A uniformly random solution drawn with the caller's generator.
    pub fn sample_with(&self, nd: &NiceDecomposition, rng: &mut impl RngCore) -> Result<Coloring> {
        self.trace(nd, |options| {
            let total: BigUint = options.iter().flatten().sum();
            let mut pick = uniform_below(&total, rng);
            for (i, c) in options.iter().enumerate() {
                if let Some(c) = c {
                    if &pick < c {
                        return i;
                    }
                    pick -= c;
                }
            }
            unreachable!("pick is below the total")
        })
        .ok_or(Error::Unsatisfiable)
    }

    /// Top-down walk from the root. At each Forget node `choose` gets the
    /// counts of the forgotten vertex's colors and returns one with a count.
    fn trace(&self, nd: &NiceDecomposition, mut choose: impl FnMut(&[Option<BigUint>]) -> usize) -> Option<Coloring> {
        assert!(self.retained, "tables were discarded; run the DP with retention");
        let Some(root) = self.root else {
            return Some(Coloring::new(Vec::new()));
        };
        if self.total() == BigUint::default() {
            return None;
        }
        let mut colors = vec![usize::MAX; nd.num_vertices()];
        let mut stack = vec![(root, 0u128)];
        let mut options = Vec::new();
        while let Some((b, key)) = stack.pop() {
            let node = nd.node(b);
            let w = &self.weights[b];
            match node.kind {
                NiceKind::Leaf(v) => colors[v] = key as usize,
                NiceKind::Introduce(v) => {
                    let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                    stack.push((node.children[0], key % w[p] + key / w[p + 1] * w[p]));
                }
                NiceKind::Forget(v) => {
                    let child = node.children[0];
                    let cw = &self.weights[child];
                    let p = nd.node(child).bag.binary_search(&v).expect("forgotten vertex in child bag");
                    let radix = cw[p + 1] / cw[p];
                    let (lo, hi) = (key % cw[p], key / cw[p]);
                    options.clear();
                    for c in 0..radix {
                        options.push(self.tables[child].get(&(lo + c * cw[p] + hi * cw[p + 1])).cloned());
                    }
                    let c = choose(&options);
                    colors[v] = c;
                    stack.push((child, lo + c as u128 * cw[p] + hi * cw[p + 1]));
                }
                NiceKind::Join => {
                    stack.push((node.children[1], key));
                    stack.push((node.children[0], key));
                }
            }
        }
        Some(Coloring::new(colors))
    }
}

/// Uniform integer in `0..bound` by rejection over random bits.
fn uniform_below(bound: &BigUint, rng: &mut impl RngCore) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top_mask = if bits.is_multiple_of(32) { u32::MAX } else { (1u32 << (bits % 32)) - 1 };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(last) = digits.last_mut() {
            *last &= top_mask;
        }
        let x = BigUint::from_slice(&digits);
        if &x < bound {
            return x;
        }
    }
}

/// Runs the counting DP, keeping every table for witness and sampling.
pub fn run_dp(inst: &HecspInstance, nd: &NiceDecomposition) -> Result<SolutionTable> {
    run_dp_with(inst, nd, |_, _| true, true)
}

/// Runs the counting DP with an extra unary filter: vertex `v` may only take
/// colors `c` with `allow(v, c)`. With `retain = false` each child table is
/// dropped once its parent is built, which suits plain counting.
pub fn run_dp_with(
    inst: &HecspInstance,
    nd: &NiceDecomposition,
    allow: impl Fn(usize, usize) -> bool,
    retain: bool,
) -> Result<SolutionTable> {
    let g = inst.graph();
    if nd.num_vertices() != g.len() {
        return Err(Error::Mismatch(format!(
            "decomposition covers {} vertices, instance has {}",
            nd.num_vertices(),
            g.len()
        )));
    }
    let report = validate_nice(g, nd);
    if let Some(v) = report.violations.first() {
        return Err(Error::Mismatch(format!("decomposition does not fit the instance: {v:?}")));
    }

    let nodes = nd.nodes();
    let mut weights = Vec::with_capacity(nodes.len());
    for node in nodes {
        let mut w = Vec::with_capacity(node.bag.len() + 1);
        let mut acc: u128 = 1;
        w.push(acc);
        for &v in &node.bag {
            acc = acc.checked_mul(inst.admissible(v).max(1) as u128).ok_or(Error::KeyOverflow)?;
            w.push(acc);
        }
        weights.push(w);
    }

    let mut tables: Vec<Table> = Vec::with_capacity(nodes.len());
    for (b, node) in nodes.iter().enumerate() {
        let table = match node.kind {
            NiceKind::Leaf(v) => {
                (0..inst.admissible(v)).filter(|&c| allow(v, c)).map(|c| (c as u128, BigUint::from(1u32))).collect()
            }
            NiceKind::Introduce(v) => {
                let child = node.children[0];
                let cw = &weights[child];
                let p = node.bag.binary_search(&v).expect("introduced vertex in bag");
                let radix = inst.admissible(v) as u128;
                // (position in child bag, table, whether v is the low endpoint)
                let checks: Vec<(usize, usize, bool)> = node
                    .edge_checks
                    .iter()
                    .map(|&(lo, hi)| {
                        let other = if lo == v { hi } else { lo };
                        let q = nd.node(child).bag.binary_search(&other).expect("checked endpoint in bag");
                        let e = inst.edge_index(lo, hi).expect("checked edge exists");
                        (q, e, lo == v)
                    })
                    .collect();
                let colors: Vec<usize> = (0..inst.admissible(v)).filter(|&c| allow(v, c)).collect();
                let mut out = Table::default();
                for (&key, count) in &tables[child] {
                    let (lo, hi) = (key % cw[p], key / cw[p]);
                    'color: for &c in &colors {
                        for &(q, e, v_low) in &checks {
                            let d = (key / cw[q] % (cw[q + 1] / cw[q])) as usize;
                            let ok = if v_low { inst.table(e).allows(c, d) } else { inst.table(e).allows(d, c) };
                            if !ok {
                                continue 'color;
                            }
                        }
                        out.insert(lo + c as u128 * cw[p] + hi * cw[p] * radix, count.clone());
                    }
                }
                out
            }
            NiceKind::Forget(v) => {
                let child = node.children[0];
                let cw = &weights[child];
                let p = nd.node(child).bag.binary_search(&v).expect("forgotten vertex in child bag");
                let mut out = Table::default();
                for (&key, count) in &tables[child] {
                    let reduced = key % cw[p] + key / cw[p + 1] * cw[p];
                    *out.entry(reduced).or_default() += count;
                }
                out
            }
            NiceKind::Join => {
                let (a, c) = (node.children[0], node.children[1]);
                let (small, large) = if tables[a].len() <= tables[c].len() {
                    (&tables[a], &tables[c])
                } else {
                    (&tables[c], &tables[a])
                };
                small.iter().filter_map(|(key, x)| large.get(key).map(|y| (*key, x * y))).collect()
            }
        };
        tables.push(table);
        if !retain {
            for &c in &node.children {
                tables[c] = Table::default();
            }
        }
        debug_assert_eq!(b + 1, tables.len());
    }
    Ok(SolutionTable { tables, weights, root: nd.root(), retained: retain })
}

/// Whether the instance has a solution.
pub fn decide(inst: &HecspInstance, nd: &NiceDecomposition) -> Result<bool> {
    Ok(count(inst, nd)? > BigUint::default())
}

/// The exact number of solutions.
pub fn count(inst: &HecspInstance, nd: &NiceDecomposition) -> Result<BigUint> {
    Ok(run_dp_with(inst, nd, |_, _| true, false)?.total())
}

/// A deterministic solution, or `None` when unsatisfiable.
pub fn witness(inst: &HecspInstance, nd: &NiceDecomposition) -> Result<Option<Coloring>> {
    Ok(run_dp(inst, nd)?.witness(nd))
}

/// A uniformly random solution determined by `seed`.
pub fn sample(inst: &HecspInstance, nd: &NiceDecomposition, seed: u64) -> Result<Coloring> {
    run_dp(inst, nd)?.sample(nd, seed)
}

/// A neighborhood-constrained instance reduced and decomposed, ready for the DP.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub hecsp: HecspInstance,
    pub decode_map: DecodeMap,
    pub nice: NiceDecomposition,
    /// Width of the plain decomposition the nice one came from.
    pub width: usize,
}

impl Prepared {
    /// Reduces with [`reduce_to_hecsp`] (or the compact variant) and decomposes
    /// with the min-fill run whose largest bag has the fewest colorings.
    pub fn new(inst: &HlcspInstance, seeds: u64, compact: bool) -> Result<Self> {
        let (hecsp, decode_map) = if compact { reduce_to_hecsp_compact(inst) } else { reduce_to_hecsp(inst) };
        let cost: Vec<f64> = hecsp.admissible_counts().iter().map(|&a| (a.max(1) as f64).log2()).collect();
        let td = build_decomposition_by_cost(hecsp.graph(), seeds, &cost);
        let nice = to_nice(hecsp.graph(), &td)?;
        Ok(Prepared { hecsp, decode_map, nice, width: td.width() })
    }

    pub fn run(&self) -> Result<SolutionTable> {
        run_dp(&self.hecsp, &self.nice)
    }

    pub fn count(&self) -> Result<BigUint> {
        count(&self.hecsp, &self.nice)
    }

    /// A witness in the original colors.
    pub fn witness(&self) -> Result<Option<Coloring>> {
        witness(&self.hecsp, &self.nice)?.map(|w| decode(&w, &self.decode_map)).transpose()
    }

    /// A uniform sample in the original colors.
    pub fn sample(&self, seed: u64) -> Result<Coloring> {
        decode(&sample(&self.hecsp, &self.nice, seed)?, &self.decode_map)
    }
}

fn guard(n: usize) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    Ok(())
}

/// Counts solutions by exhaustive search, in vertex order, rejecting a partial
/// coloring as soon as an edge between colored vertices fails.
pub fn brute_force_count(inst: &HecspInstance) -> Result<BigUint> {
    let g = inst.graph();
    let n = g.len();
    guard(n)?;
    // Edges back to earlier vertices: (earlier vertex, table, earlier is low).
    let back: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| u < v)
                .map(|&u| (u, inst.edge_index(u, v).expect("edge exists")))
                .collect()
        })
        .collect();
    fn go(v: usize, colors: &mut Vec<usize>, inst: &HecspInstance, back: &[Vec<(usize, usize)>]) -> u64 {
        if v == colors.len() {
            return 1;
        }
        let mut total = 0;
        for c in 0..inst.admissible(v) {
            if back[v].iter().all(|&(u, e)| inst.table(e).allows(colors[u], c)) {
                colors[v] = c;
                total += go(v + 1, colors, inst, back);
            }
        }
        total
    }
    let mut colors = vec![0; n];
    Ok(BigUint::from(go(0, &mut colors, inst, &back)))
}

/// Counts solutions of a neighborhood-constrained instance by enumerating every
/// coloring and checking it.
pub fn brute_force_count_hlcsp(inst: &HlcspInstance) -> Result<BigUint> {
    let n = inst.graph().len();
    guard(n)?;
    let k = inst.colors().len();
    if k == 0 {
        return Ok(BigUint::from(u32::from(n == 0)));
    }
    let mut colors = vec![0; n];
    let mut total = 0u64;
    loop {
        let c = Coloring::new(colors.clone());
        if check_hlcsp(inst, &c) {
            total += 1;
        }
        let mut i = 0;
        while i < n && colors[i] + 1 == k {
            colors[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        colors[i] += 1;
    }
    Ok(BigUint::from(total))
}

/// Every solution, by exhaustive search; for small test instances.
pub fn enumerate_solutions(inst: &HecspInstance) -> Result<Vec<Coloring>> {
    let n = inst.graph().len();
    guard(n)?;
    let mut out = Vec::new();
    let mut colors = vec![0; n];
    fn go(v: usize, colors: &mut Vec<usize>, inst: &HecspInstance, out: &mut Vec<Coloring>) {
        if v == colors.len() {
            out.push(Coloring::new(colors.clone()));
            return;
        }
        for c in 0..inst.admissible(v) {
            let ok = inst.graph().neighbors(v).iter().filter(|&&u| u < v).all(|&u| {
                let e = inst.edge_index(u, v).expect("edge exists");
                inst.table(e).allows(colors[u], c)
            });
            if ok {
                colors[v] = c;
                go(v + 1, colors, inst, out);
            }
        }
    }
    go(0, &mut colors, inst, &mut out);
    Ok(out)
}
