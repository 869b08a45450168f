//! Minesweeper on tessellations, encoded as a neighborhood-constrained problem.
//!
//! Colors are `CLEAR = 0` and `MINE = 1`. A clue cell holds no mine and its
//! number counts mines among its proper neighbors.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csp::{all_tuples, neighborhood, ColorSet, HlcspInstance};
use crate::engine::{run_dp_with, Prepared};
use crate::error::{Error, Result};
use crate::tessellation::{generate_tiling, HypGraph, TilingSpec};
use crate::treedec::default_seeds;

pub const CLEAR: usize = 0;
pub const MINE: usize = 1;

/// Externally known content of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellState {
    Mine,
    Clear,
}

impl CellState {
    pub fn color(self) -> usize {
        match self {
            CellState::Mine => MINE,
            CellState::Clear => CLEAR,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Board {
    graph: HypGraph,
    clues: BTreeMap<usize, usize>,
    flags: BTreeMap<usize, CellState>,
}

impl Board {
    pub fn new(graph: HypGraph, clues: BTreeMap<usize, usize>, flags: BTreeMap<usize, CellState>) -> Result<Self> {
        for (&cell, &n) in &clues {
            if cell >= graph.len() {
                return Err(Error::UnknownVertex(cell));
            }
            if n > graph.degree(cell) {
                return Err(Error::InvalidBoard(format!(
                    "clue {n} on cell {cell} exceeds its {} neighbors",
                    graph.degree(cell)
                )));
            }
        }
        for (&cell, &state) in &flags {
            if cell >= graph.len() {
                return Err(Error::UnknownVertex(cell));
            }
            if state == CellState::Mine && clues.contains_key(&cell) {
                return Err(Error::InvalidBoard(format!("clue cell {cell} is flagged as a mine")));
            }
        }
        Ok(Board { graph, clues, flags })
    }

    /// A board with no clues and no flags.
    pub fn blank(graph: HypGraph) -> Self {
        Board { graph, clues: BTreeMap::new(), flags: BTreeMap::new() }
    }

    pub fn graph(&self) -> &HypGraph {
        &self.graph
    }

    pub fn clues(&self) -> &BTreeMap<usize, usize> {
        &self.clues
    }

    pub fn flags(&self) -> &BTreeMap<usize, CellState> {
        &self.flags
    }

    /// Adds or replaces a flag, re-checking the board.
    pub fn with_flag(&self, cell: usize, state: CellState) -> Result<Self> {
        let mut flags = self.flags.clone();
        flags.insert(cell, state);
        Board::new(self.graph.clone(), self.clues.clone(), flags)
    }

    /// Cells with neither a clue nor a flag.
    pub fn unknown_cells(&self) -> Vec<usize> {
        (0..self.graph.len()).filter(|v| !self.clues.contains_key(v) && !self.flags.contains_key(v)).collect()
    }

    /// The state a cell is known to have from its clue or flag, if any.
    pub fn known(&self, cell: usize) -> Option<CellState> {
        if self.clues.contains_key(&cell) {
            Some(CellState::Clear)
        } else {
            self.flags.get(&cell).copied()
        }
    }

    /// Whether a mine layout (`true` = mine) satisfies every clue and flag.
    pub fn satisfied_by(&self, mines: &[bool]) -> bool {
        mines.len() == self.graph.len()
            && self
                .clues
                .iter()
                .all(|(&v, &n)| !mines[v] && self.graph.neighbors(v).iter().filter(|&&u| mines[u]).count() == n)
            && self.flags.iter().all(|(&v, &s)| mines[v] == (s == CellState::Mine))
    }
}

/// Builds the neighborhood-constrained instance of a board.
///
/// A clue cell allows the tuples where it is clear and exactly its number of
/// neighbors are mines; a flagged cell fixes its own slot; any other cell
/// allows every tuple.
pub fn encode(b: &Board) -> Result<HlcspInstance> {
    let g = &b.graph;
    let mut allowed = Vec::with_capacity(g.len());
    for v in 0..g.len() {
        let nb = neighborhood(g, v)?;
        let own = b.known(v).map(CellState::color);
        let clue = b.clues.get(&v).copied();
        let tuples = all_tuples(2, nb.len())
            .filter(|t| own.is_none_or(|c| t[0] == c))
            .filter(|t| clue.is_none_or(|n| t[1..].iter().filter(|&&x| x == MINE).count() == n))
            .collect();
        allowed.push(tuples);
    }
    HlcspInstance::new(g.clone(), ColorSet::new(["CLEAR", "MINE"])?, allowed)
}

fn prepare(b: &Board) -> Result<Prepared> {
    Prepared::new(&encode(b)?, default_seeds(), true)
}

/// Whether some mine layout satisfies every clue and flag.
pub fn consistent(b: &Board) -> Result<bool> {
    Ok(prepare(b)?.count()? > BigUint::default())
}

/// The number of mine layouts satisfying the board.
pub fn count_layouts(b: &Board) -> Result<BigUint> {
    prepare(b)?.count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellStatus {
    ForcedMine,
    ForcedClear,
    Ambiguous,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::ForcedMine => "FORCED_MINE",
            CellStatus::ForcedClear => "FORCED_CLEAR",
            CellStatus::Ambiguous => "AMBIGUOUS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionResult {
    /// Number of mine layouts satisfying the board.
    pub total: BigUint,
    /// Status of every unknown cell; `None` when the board is inconsistent.
    pub cells: Option<BTreeMap<usize, CellStatus>>,
}

/// Classifies every unknown cell by re-counting with that cell forced to be a mine.
pub fn deduce(b: &Board) -> Result<DeductionResult> {
    let prepared = prepare(b)?;
    let total = prepared.count()?;
    if total == BigUint::default() {
        return Ok(DeductionResult { total, cells: None });
    }
    let mut cells = BTreeMap::new();
    for v in b.unknown_cells() {
        let dm = &prepared.decode_map;
        let with_mine = run_dp_with(
            &prepared.hecsp,
            &prepared.nice,
            |u, j| u != v || dm.tuple(u, j).is_some_and(|t| t[0] == MINE),
            false,
        )?
        .total();
        let status = if with_mine == BigUint::default() {
            CellStatus::ForcedClear
        } else if with_mine == total {
            CellStatus::ForcedMine
        } else {
            CellStatus::Ambiguous
        };
        cells.insert(v, status);
    }
    Ok(DeductionResult { total, cells: Some(cells) })
}

/// A random board and the mine layout it was made from.
///
/// Each cell is a mine with probability `mine_density`; each clear cell shows
/// its clue with probability `reveal_fraction`.
pub fn generate_board_with_mines(
    spec: &TilingSpec,
    mine_density: f64,
    reveal_fraction: f64,
    seed: u64,
) -> Result<(Board, Vec<bool>)> {
    for (name, x) in [("mine density", mine_density), ("reveal fraction", reveal_fraction)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidBoard(format!("{name} {x} is outside [0, 1]")));
        }
    }
    let graph = generate_tiling(spec)?;
    Ok(board_on(graph, mine_density, reveal_fraction, seed))
}

/// [`generate_board_with_mines`] without the layout.
pub fn generate_board(spec: &TilingSpec, mine_density: f64, reveal_fraction: f64, seed: u64) -> Result<Board> {
    Ok(generate_board_with_mines(spec, mine_density, reveal_fraction, seed)?.0)
}

/// Places mines and reveals clues on an existing graph.
pub fn board_on(graph: HypGraph, mine_density: f64, reveal_fraction: f64, seed: u64) -> (Board, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mines: Vec<bool> = (0..graph.len()).map(|_| rng.gen_bool(mine_density.clamp(0.0, 1.0))).collect();
    let mut clues = BTreeMap::new();
    for v in 0..graph.len() {
        if !mines[v] && rng.gen_bool(reveal_fraction.clamp(0.0, 1.0)) {
            clues.insert(v, graph.neighbors(v).iter().filter(|&&u| mines[u]).count());
        }
    }
    (Board { graph, clues, flags: BTreeMap::new() }, mines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::HypPoint;
    use crate::tessellation::Params;

    fn graph(n: usize, edges: &[(usize, usize)]) -> HypGraph {
        let pts = (0..n).map(|i| HypPoint::from_polar(i as f64, 0.3 * i as f64)).collect();
        HypGraph::new(pts, edges.iter().copied(), Params { r: 0.5, d: 2.0 }).unwrap()
    }

    fn ring1() -> HypGraph {
        generate_tiling(&TilingSpec::new(7, 3, 1)).unwrap()
    }

    fn clues(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    /// Brute force over all 2^n layouts.
    pub(crate) fn enumerate_layouts(b: &Board) -> Vec<Vec<bool>> {
        let n = b.graph().len();
        (0u64..1 << n)
            .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|l| b.satisfied_by(l))
            .collect()
    }

    #[test]
    fn clue_tuple_counts() {
        let g = ring1();
        assert_eq!(g.degree(0), 7);
        let zero = encode(&Board::new(g.clone(), clues(&[(0, 0)]), BTreeMap::new()).unwrap()).unwrap();
        assert_eq!(zero.constraint(0).allowed().len(), 1);
        let three = encode(&Board::new(g.clone(), clues(&[(0, 3)]), BTreeMap::new()).unwrap()).unwrap();
        assert_eq!(three.constraint(0).allowed().len(), 35);
        assert_eq!(three.constraint(1).allowed().len(), 1 << (g.degree(1) + 1));
        assert!(matches!(Board::new(g, clues(&[(0, 8)]), BTreeMap::new()), Err(Error::InvalidBoard(_))));
    }

    #[test]
    fn board_validation() {
        let g = ring1();
        assert!(matches!(Board::new(g.clone(), clues(&[(99, 0)]), BTreeMap::new()), Err(Error::UnknownVertex(99))));
        let flags = [(0, CellState::Mine)].into_iter().collect();
        assert!(matches!(Board::new(g, clues(&[(0, 1)]), flags), Err(Error::InvalidBoard(_))));
    }

    #[test]
    fn blank_boards_count_every_layout() {
        let g = graph(10, &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (7, 8), (8, 9), (3, 4)]);
        let b = Board::blank(g);
        assert!(consistent(&b).unwrap());
        assert_eq!(count_layouts(&b).unwrap(), BigUint::from(1024u32));
    }

    #[test]
    fn contradictory_neighbors() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 2)).unwrap();
        assert!(g.has_edge(0, 1) && g.degree(0) == 7 && g.degree(1) == 7);
        let b = Board::new(g, clues(&[(0, 0), (1, 7)]), BTreeMap::new()).unwrap();
        assert!(!consistent(&b).unwrap());
        let d = deduce(&b).unwrap();
        assert_eq!(d.total, BigUint::default());
        assert!(d.cells.is_none());
    }

    #[test]
    fn zero_and_full_clues_force_neighbors() {
        let g = ring1();
        let b = Board::new(g.clone(), clues(&[(0, 0)]), BTreeMap::new()).unwrap();
        let d = deduce(&b).unwrap();
        let cells = d.cells.unwrap();
        for &u in g.neighbors(0) {
            assert_eq!(cells[&u], CellStatus::ForcedClear);
        }

        let center = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let b = Board::new(center, clues(&[(0, 3)]), BTreeMap::new()).unwrap();
        let cells = deduce(&b).unwrap().cells.unwrap();
        assert!(cells.values().all(|&s| s == CellStatus::ForcedMine));
    }

    #[test]
    fn deduction_matches_enumeration_on_small_boards() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..60 {
            let n = rng.gen_range(1..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v));
                    }
                }
            }
            let (b, _) = board_on(graph(n, &edges), rng.gen_range(0.0..0.6), rng.gen_range(0.0..1.0), round);
            let layouts = enumerate_layouts(&b);
            let d = deduce(&b).unwrap();
            assert_eq!(d.total, BigUint::from(layouts.len()));
            let cells = d.cells.unwrap();
            for v in b.unknown_cells() {
                let mines = layouts.iter().filter(|l| l[v]).count();
                let expected = match mines {
                    0 => CellStatus::ForcedClear,
                    m if m == layouts.len() => CellStatus::ForcedMine,
                    _ => CellStatus::Ambiguous,
                };
                assert_eq!(cells[&v], expected, "cell {v} on board {round}");
            }
        }
    }

    #[test]
    fn generator_edge_cases() {
        let spec = TilingSpec::new(7, 3, 2);
        let b = generate_board(&spec, 0.0, 1.0, 3).unwrap();
        assert!(b.clues().values().all(|&n| n == 0));
        assert_eq!(b.clues().len(), b.graph().len());
        let b = generate_board(&spec, 1.0, 0.0, 3).unwrap();
        assert!(b.clues().is_empty());
        assert!(consistent(&b).unwrap());
        assert!(generate_board(&spec, 1.5, 0.0, 3).is_err());
    }

    #[test]
    fn generated_boards_are_consistent_and_never_misdeduce_mines() {
        let spec = TilingSpec::new(7, 3, 2);
        for seed in 0..10 {
            let (b, mines) = generate_board_with_mines(&spec, 0.25, 0.6, seed).unwrap();
            let d = deduce(&b).unwrap();
            let cells = d.cells.expect("generated boards are consistent");
            for (v, s) in cells {
                if mines[v] {
                    assert_ne!(s, CellStatus::ForcedClear);
                } else {
                    assert_ne!(s, CellStatus::ForcedMine);
                }
            }
        }
    }
}
