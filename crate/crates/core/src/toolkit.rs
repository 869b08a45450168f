//! The JSON instance format and a Poincaré-disk SVG renderer.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::csp::{neighborhood, ColorSet, Coloring, HlcspInstance};
use crate::error::{Error, Result};
use crate::geometry::{geodesic_point, to_poincare, HypPoint, Isometry};
use crate::minesweeper::{Board, CellState};
use crate::tessellation::{HypGraph, Params};

pub const FORMAT_VERSION: u32 = 1;

/// Significant digits kept for floats in written files.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub graph: GraphSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hlcsp: Option<HlcspSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub board: Option<BoardSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub params: ParamsSection,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub r: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HlcspSection {
    pub colors: Vec<String>,
    pub constraints: Vec<ConstraintEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintEntry {
    pub v: usize,
    pub neighborhood: Vec<usize>,
    pub allowed: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoardSection {
    #[serde(default)]
    pub clues: Vec<ClueEntry>,
    #[serde(default)]
    pub flags: Vec<FlagEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClueEntry {
    pub cell: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagEntry {
    pub cell: usize,
    pub state: FlagState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlagState {
    #[serde(rename = "MINE")]
    Mine,
    #[serde(rename = "CLEAR")]
    Clear,
}

impl From<CellState> for FlagState {
    fn from(s: CellState) -> Self {
        match s {
            CellState::Mine => FlagState::Mine,
            CellState::Clear => FlagState::Clear,
        }
    }
}

impl From<FlagState> for CellState {
    fn from(s: FlagState) -> Self {
        match s {
            FlagState::Mine => CellState::Mine,
            FlagState::Clear => CellState::Clear,
        }
    }
}

/// Rounds to [`FLOAT_DIGITS`] significant digits.
pub fn round_float(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_float(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

impl InstanceFile {
    pub fn from_graph(g: &HypGraph) -> Self {
        let Params { r, d } = g.params();
        let vertices =
            g.positions().iter().enumerate().map(|(id, p)| VertexEntry { id, x: p.x(), y: p.y(), z: p.z() }).collect();
        let edges = g.edges().iter().map(|&(u, v)| [u, v]).collect();
        InstanceFile {
            format_version: FORMAT_VERSION,
            graph: GraphSection { params: ParamsSection { r, d }, vertices, edges },
            hlcsp: None,
            board: None,
        }
    }

    pub fn from_hlcsp(inst: &HlcspInstance) -> Self {
        let mut file = Self::from_graph(inst.graph());
        let constraints = inst
            .constraints()
            .iter()
            .enumerate()
            .map(|(v, c)| ConstraintEntry { v, neighborhood: c.neighborhood().to_vec(), allowed: c.allowed().to_vec() })
            .collect();
        file.hlcsp = Some(HlcspSection { colors: inst.colors().names().to_vec(), constraints });
        file
    }

    pub fn from_board(b: &Board) -> Self {
        let mut file = Self::from_graph(b.graph());
        file.board = Some(BoardSection {
            clues: b.clues().iter().map(|(&cell, &n)| ClueEntry { cell, n }).collect(),
            flags: b.flags().iter().map(|(&cell, &s)| FlagEntry { cell, state: s.into() }).collect(),
        });
        file
    }

    /// Canonical text: sorted keys, floats at [`FLOAT_DIGITS`] significant
    /// digits, two-space indentation, trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        round_floats(&mut value);
        let mut out = serde_json::to_string_pretty(&value)?;
        out.push('\n');
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {}", file.format_version)));
        }
        Ok(file)
    }

    pub fn to_graph(&self) -> Result<HypGraph> {
        let n = self.graph.vertices.len();
        let mut positions = vec![None; n];
        for v in &self.graph.vertices {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(Error::Format(format!("vertex {} has a non-finite coordinate", v.id)));
            }
            let slot =
                positions.get_mut(v.id).ok_or_else(|| Error::Format(format!("vertex id {} outside 0..{n}", v.id)))?;
            if slot.is_some() {
                return Err(Error::Format(format!("vertex id {} appears twice", v.id)));
            }
            *slot = Some(HypPoint::from_coords(v.x, v.y, v.z)?);
        }
        let positions = positions.into_iter().map(|p| p.expect("every id seen once")).collect();
        let ParamsSection { r, d } = self.graph.params;
        if !(r.is_finite() && d.is_finite()) {
            return Err(Error::Format("non-finite params".into()));
        }
        HypGraph::new(positions, self.graph.edges.iter().map(|e| (e[0], e[1])), Params { r, d })
    }

    /// The constraint section over `g`. Neighborhoods may list their vertices
    /// in any order; tuples are permuted to the canonical one.
    pub fn to_hlcsp(&self, g: &HypGraph) -> Result<HlcspInstance> {
        let section = self.hlcsp.as_ref().ok_or_else(|| Error::Format("no hlcsp section".into()))?;
        let colors = ColorSet::new(section.colors.iter().cloned())?;
        let mut allowed: Vec<Option<Vec<Vec<usize>>>> = vec![None; g.len()];
        for c in &section.constraints {
            let canonical = neighborhood(g, c.v)?;
            let mut sorted_file = c.neighborhood.clone();
            sorted_file.sort_unstable();
            let mut sorted_canon = canonical.clone();
            sorted_canon.sort_unstable();
            if sorted_file != sorted_canon {
                return Err(Error::Format(format!("constraint of vertex {} has the wrong neighborhood", c.v)));
            }
            let perm: Vec<usize> = canonical
                .iter()
                .map(|w| c.neighborhood.iter().position(|x| x == w).expect("same vertex set"))
                .collect();
            let tuples = c
                .allowed
                .iter()
                .map(|t| {
                    if t.len() != perm.len() {
                        return Err(Error::Format(format!("tuple of wrong length at vertex {}", c.v)));
                    }
                    Ok(perm.iter().map(|&i| t[i]).collect())
                })
                .collect::<Result<Vec<Vec<usize>>>>()?;
            if allowed[c.v].replace(tuples).is_some() {
                return Err(Error::Format(format!("vertex {} has two constraints", c.v)));
            }
        }
        let allowed = allowed
            .into_iter()
            .enumerate()
            .map(|(v, a)| a.ok_or_else(|| Error::Format(format!("vertex {v} has no constraint"))))
            .collect::<Result<Vec<_>>>()?;
        HlcspInstance::new(g.clone(), colors, allowed)
    }

    pub fn to_board(&self, g: &HypGraph) -> Result<Board> {
        let section = self.board.as_ref().ok_or_else(|| Error::Format("no board section".into()))?;
        let mut clues = BTreeMap::new();
        for c in &section.clues {
            if clues.insert(c.cell, c.n).is_some() {
                return Err(Error::Format(format!("cell {} has two clues", c.cell)));
            }
        }
        let mut flags = BTreeMap::new();
        for f in &section.flags {
            if flags.insert(f.cell, f.state.into()).is_some() {
                return Err(Error::Format(format!("cell {} has two flags", f.cell)));
            }
        }
        Board::new(g.clone(), clues, flags)
    }
}

/// A coloring as JSON: `{"coloring": [name of the color of each vertex]}`.
pub fn coloring_json(c: &Coloring, colors: &ColorSet) -> Result<String> {
    let names: Vec<&str> = c.as_slice().iter().map(|&i| colors.name(i)).collect();
    let mut out = serde_json::to_string(&serde_json::json!({ "coloring": names }))?;
    out.push('\n');
    Ok(out)
}

/// Reads the output of [`coloring_json`] back into color indices.
pub fn parse_coloring_json(text: &str, colors: &ColorSet) -> Result<Coloring> {
    #[derive(Deserialize)]
    struct Doc {
        coloring: Vec<String>,
    }
    let doc: Doc = serde_json::from_str(text)?;
    doc.coloring
        .iter()
        .map(|name| colors.index_of(name).ok_or_else(|| Error::Format(format!("unknown color {name:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(Coloring::new)
}

/// How cells are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillRule {
    /// Palette entry of each cell's color; needs a coloring.
    ByColor,
    /// Palette entry of each clue value; needs a board.
    ByClue,
    /// Mines dark, clue cells by clue value, other cells light; needs a board
    /// and a coloring of it.
    BySolution,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    pub fill: FillRule,
    pub stroke_width: f64,
    /// Radius of the Poincaré disk in pixels.
    pub radius_px: f64,
    pub labels: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle { fill: FillRule::ByColor, stroke_width: 0.5, radius_px: 400.0, labels: false }
    }
}

/// What to draw on top of the cells.
#[derive(Debug, Clone, Copy)]
pub enum Overlay<'a> {
    None,
    Coloring(&'a Coloring),
    Board(&'a Board, Option<&'a Coloring>),
}

/// Fill colors, indexed by color or clue value.
pub const PALETTE: [&str; 10] =
    ["#f4f1de", "#e9c46a", "#2a9d8f", "#e76f51", "#264653", "#8ab17d", "#b56576", "#6d597a", "#f4a261", "#457b9d"];
const NEUTRAL: &str = "#dddddd";
const MINE_FILL: &str = "#3d0c11";
const UNKNOWN_FILL: &str = "#f8f8f8";

/// Tile shape guessed from the graph: the largest degree is the polygon's
/// side count, and the neighbor spacing fixes the corner count.
fn tile_shape(g: &HypGraph) -> Option<(usize, f64)> {
    let p = g.max_degree();
    let &(u, v) = g.edges().first()?;
    if p < 3 {
        return None;
    }
    let s = crate::geometry::dist(g.position(u), g.position(v));
    let cos_pi_q = (s / 2.0).cosh() * (PI / p as f64).sin();
    if !(cos_pi_q > 0.0 && cos_pi_q < 1.0) {
        return None;
    }
    let q = PI / cos_pi_q.acos();
    // cosh R = cot(π/p) cot(π/q)
    let cosh_r = 1.0 / ((PI / p as f64).tan() * (PI / q).tan());
    (cosh_r >= 1.0).then(|| (p, cosh_r.acosh()))
}

fn cell_corners(g: &HypGraph, v: usize, shape: Option<(usize, f64)>) -> Vec<HypPoint> {
    let center = g.position(v);
    let to_center = Isometry::translation_to(center);
    let (sides, radius) = shape.unwrap_or((8, g.params().r / 2.0));
    let phase = match g.neighbors(v).first() {
        Some(&u) => to_center.inverse().apply(g.position(u)).angle(),
        None => 0.0,
    };
    (0..sides)
        .map(|k| {
            let theta = phase + PI * (2 * k + 1) as f64 / sides as f64;
            to_center.apply(&HypPoint::from_polar(radius, theta))
        })
        .collect()
}

/// Draws the graph's cells in the Poincaré disk.
pub fn render_svg(g: &HypGraph, overlay: Overlay<'_>, style: &RenderStyle) -> Result<String> {
    if !(style.radius_px > 0.0 && style.radius_px.is_finite()) {
        return Err(Error::InvalidInstance(format!("disk radius {} must be positive", style.radius_px)));
    }
    let n = g.len();
    let coloring = match overlay {
        Overlay::Coloring(c) | Overlay::Board(_, Some(c)) => Some(c),
        _ => None,
    };
    if coloring.is_some_and(|c| c.len() != n) {
        return Err(Error::Mismatch("coloring does not cover the graph".into()));
    }
    let board = match overlay {
        Overlay::Board(b, _) => Some(b),
        _ => None,
    };
    if board.is_some_and(|b| b.graph() != g) {
        return Err(Error::Mismatch("board is on another graph".into()));
    }
    let fill_of = |v: usize| -> String {
        match (style.fill, coloring, board) {
            (FillRule::ByColor, Some(c), _) => PALETTE[c.get(v) % PALETTE.len()].to_string(),
            (FillRule::ByClue, _, Some(b)) | (FillRule::BySolution, None, Some(b)) => match b.clues().get(&v) {
                Some(&k) => PALETTE[k % PALETTE.len()].to_string(),
                None if b.flags().get(&v) == Some(&CellState::Mine) => MINE_FILL.to_string(),
                None => UNKNOWN_FILL.to_string(),
            },
            (FillRule::BySolution, Some(c), Some(b)) => match b.clues().get(&v) {
                Some(&k) => PALETTE[k % PALETTE.len()].to_string(),
                None if c.get(v) == crate::minesweeper::MINE => MINE_FILL.to_string(),
                None => UNKNOWN_FILL.to_string(),
            },
            _ => NEUTRAL.to_string(),
        }
    };

    let size = 2.0 * style.radius_px + 2.0 * style.stroke_width.max(1.0);
    let c0 = size / 2.0;
    let project = |p: &HypPoint| {
        let (x, y) = to_poincare(p);
        (c0 + x * style.radius_px, c0 - y * style.radius_px)
    };
    let shape = tile_shape(g);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size:.3}\" height=\"{size:.3}\" viewBox=\"0 0 {size:.3} {size:.3}\">"
    );
    let _ = writeln!(
        out,
        "<circle cx=\"{c0:.3}\" cy=\"{c0:.3}\" r=\"{:.3}\" fill=\"white\" stroke=\"black\" stroke-width=\"{:.3}\"/>",
        style.radius_px,
        style.stroke_width.max(1.0)
    );
    for v in 0..n {
        let corners = cell_corners(g, v, shape);
        let mut points = String::new();
        for (i, a) in corners.iter().enumerate() {
            let b = &corners[(i + 1) % corners.len()];
            for step in 0..8 {
                let (x, y) = project(&geodesic_point(a, b, step as f64 / 8.0));
                let _ = write!(points, "{}{x:.3},{y:.3}", if points.is_empty() { "" } else { " " });
            }
        }
        let _ = writeln!(
            out,
            "<polygon data-cell=\"{v}\" points=\"{points}\" fill=\"{}\" stroke=\"black\" stroke-width=\"{:.3}\"/>",
            fill_of(v),
            style.stroke_width
        );
    }
    if style.labels {
        for v in 0..n {
            let label = match board.and_then(|b| b.clues().get(&v)) {
                Some(k) => k.to_string(),
                None if board.is_some() => continue,
                None => v.to_string(),
            };
            let (x, y) = project(g.position(v));
            // Shrink text toward the rim like the cells do.
            let (a, b) = to_poincare(g.position(v));
            let font = (style.radius_px * 0.05 * (1.0 - a * a - b * b)).max(1.0);
            let _ = writeln!(
                out,
                "<text x=\"{x:.3}\" y=\"{y:.3}\" font-size=\"{font:.3}\" text-anchor=\"middle\" dominant-baseline=\"central\">{label}</text>"
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minesweeper::generate_board;
    use crate::tessellation::{generate_tiling, TilingSpec};

    fn polygons(svg: &str) -> Vec<Vec<(f64, f64)>> {
        svg.lines()
            .filter(|l| l.starts_with("<polygon"))
            .map(|l| {
                let start = l.find("points=\"").unwrap() + 8;
                let end = start + l[start..].find('"').unwrap();
                l[start..end]
                    .split(' ')
                    .map(|pair| {
                        let (x, y) = pair.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    fn contains(poly: &[(f64, f64)], (px, py): (f64, f64)) -> bool {
        let mut inside = false;
        for i in 0..poly.len() {
            let (x1, y1) = poly[i];
            let (x2, y2) = poly[(i + 1) % poly.len()];
            if (y1 > py) != (y2 > py) && px < x1 + (py - y1) * (x2 - x1) / (y2 - y1) {
                inside = !inside;
            }
        }
        inside
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 3)).unwrap();
        let board = generate_board(&TilingSpec::new(7, 3, 3), 0.2, 0.5, 4).unwrap().with_flag(2, CellState::Clear);
        let board = board.unwrap();
        for file in [InstanceFile::from_graph(&g), InstanceFile::from_board(&board)] {
            let first = file.to_json().unwrap();
            let reread = InstanceFile::from_json(&first).unwrap();
            assert_eq!(reread.to_json().unwrap(), first);
            assert_eq!(reread.to_graph().unwrap().edges(), g.edges());
        }
        let back = InstanceFile::from_json(&InstanceFile::from_board(&board).to_json().unwrap()).unwrap();
        let g2 = back.to_graph().unwrap();
        assert_eq!(back.to_board(&g2).unwrap().clues(), board.clues());
    }

    #[test]
    fn keys_are_sorted() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 0)).unwrap();
        let text = InstanceFile::from_graph(&g).to_json().unwrap();
        let e = text.find("\"edges\"").unwrap();
        let p = text.find("\"params\"").unwrap();
        let v = text.find("\"vertices\"").unwrap();
        assert!(text.find("\"format_version\"").unwrap() < text.find("\"graph\"").unwrap());
        assert!(e < p && p < v);
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_float(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_float(123456.7890123456), 123456.789012);
        assert_eq!(round_float(round_float(2.0f64.sqrt())), round_float(2.0f64.sqrt()));
    }

    #[test]
    fn hlcsp_section_round_trip_and_reordering() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 1)).unwrap();
        let inst = HlcspInstance::from_predicate(g.clone(), ColorSet::new(["a", "b"]).unwrap(), |_, _, t| {
            t.iter().filter(|&&x| x == 1).count() <= 1
        })
        .unwrap();
        let mut file = InstanceFile::from_hlcsp(&inst);
        let text = file.to_json().unwrap();
        assert_eq!(InstanceFile::from_json(&text).unwrap().to_hlcsp(&g).unwrap(), inst);

        // Reverse one neighborhood and its tuples: same instance.
        let c = &mut file.hlcsp.as_mut().unwrap().constraints[0];
        c.neighborhood.reverse();
        for t in &mut c.allowed {
            t.reverse();
        }
        assert_eq!(file.to_hlcsp(&g).unwrap(), inst);

        file.hlcsp.as_mut().unwrap().constraints[1].neighborhood = vec![1];
        assert!(matches!(file.to_hlcsp(&g), Err(Error::Format(_))));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(InstanceFile::from_json("{").is_err());
        assert!(InstanceFile::from_json(
            r#"{"format_version":2,"graph":{"params":{"r":1,"d":2},"vertices":[],"edges":[]}}"#
        )
        .is_err());
        let bad_id = r#"{"format_version":1,"graph":{"params":{"r":1,"d":2},"vertices":[{"id":3,"x":0,"y":0,"z":1}],"edges":[]}}"#;
        assert!(InstanceFile::from_json(bad_id).unwrap().to_graph().is_err());
        let off = r#"{"format_version":1,"graph":{"params":{"r":1,"d":2},"vertices":[{"id":0,"x":1,"y":0,"z":1}],"edges":[]}}"#;
        assert!(InstanceFile::from_json(off).unwrap().to_graph().is_err());
        let extra = r#"{"format_version":1,"graph":{"params":{"r":1,"d":2},"vertices":[],"edges":[]},"junk":1}"#;
        assert!(InstanceFile::from_json(extra).is_err());
    }

    #[test]
    fn coloring_json_round_trip() {
        let colors = ColorSet::new(["CLEAR", "MINE"]).unwrap();
        let c = Coloring::new(vec![0, 1, 1]);
        let text = coloring_json(&c, &colors).unwrap();
        assert_eq!(text, "{\"coloring\":[\"CLEAR\",\"MINE\",\"MINE\"]}\n");
        assert_eq!(parse_coloring_json(&text, &colors).unwrap(), c);
    }

    #[test]
    fn empty_graph_draws_only_the_disk() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 0)).unwrap().remove_vertices(&[0].into_iter().collect());
        let svg = render_svg(&g, Overlay::None, &RenderStyle::default()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<polygon").count(), 0);
    }

    #[test]
    fn ring_one_has_eight_cells_and_the_center_covers_the_origin() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 1)).unwrap();
        let style = RenderStyle::default();
        let svg = render_svg(&g, Overlay::None, &style).unwrap();
        let polys = polygons(&svg);
        assert_eq!(polys.len(), 8);
        let c0 = style.radius_px + style.stroke_width.max(1.0);
        assert!(contains(&polys[0], (c0, c0)));
        assert!(polys[1..].iter().all(|p| !contains(p, (c0, c0))));
        assert_eq!(polys[0].len(), 7 * 8);
        assert_eq!(svg, render_svg(&g, Overlay::None, &style).unwrap());
    }

    #[test]
    fn overlays_are_checked() {
        let g = generate_tiling(&TilingSpec::new(7, 3, 1)).unwrap();
        let short = Coloring::new(vec![0; 3]);
        assert!(render_svg(&g, Overlay::Coloring(&short), &RenderStyle::default()).is_err());
        let bad = RenderStyle { radius_px: 0.0, ..RenderStyle::default() };
        assert!(render_svg(&g, Overlay::None, &bad).is_err());
        let full = Coloring::new((0..8).map(|i| i % 3).collect());
        let svg = render_svg(&g, Overlay::Coloring(&full), &RenderStyle::default()).unwrap();
        assert!(svg.contains(PALETTE[2]));
    }
}
