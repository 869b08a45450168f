use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypcsp::csp::{ColorSet, HlcspInstance};
use hypcsp::engine::Prepared;
use hypcsp::minesweeper::{self, board_on, Board};
use hypcsp::tessellation::{generate_tiling, validate_embedding, HypGraph, TilingSpec};
use hypcsp::toolkit::{coloring_json, parse_coloring_json, render_svg, FillRule, InstanceFile, Overlay, RenderStyle};
use hypcsp::treedec::{build_decomposition, default_seeds, validate_decomposition, width_profile};
use hypcsp::Error;

#[derive(Parser)]
#[command(name = "hypcsp", version, about = "Local constraint problems on hyperbolic tessellations")]
struct Cli {
    /// Min-fill runs per decomposition (defaults to HYPCSP_SEEDS, else 16).
    #[arg(long, global = true)]
    seeds: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a {p,q} tiling disk as an instance file.
    Gen {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        rings: usize,
        /// Comma-separated cell ids to drop from the disk.
        #[arg(long, value_delimiter = ',')]
        remove: Vec<usize>,
        /// Attach a random Minesweeper board with this mine density.
        #[arg(long)]
        mines: Option<f64>,
        /// Fraction of clear cells that show their clue.
        #[arg(long, default_value_t = 0.5, requires = "mines")]
        reveal: f64,
        /// Attach a preset neighborhood constraint.
        #[arg(long, conflicts_with = "mines")]
        constraint: Option<Preset>,
        /// Seed for the random board.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the embedding and a heuristic tree decomposition.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide satisfiability and print a witness.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the exact number of solutions.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Draw a uniformly random solution.
    Sample {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every unknown Minesweeper cell.
    Deduce {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print `cells width` for rings 0..=R.
    Widths {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "max-rings")]
        max_rings: usize,
    },
    /// Render the instance in the Poincaré disk as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        /// A coloring written by `solve` or `sample`.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long, value_enum)]
        fill: Option<Fill>,
        #[arg(long, default_value_t = 400.0)]
        radius: f64,
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// At most one marked cell in every closed neighborhood.
    AtMostOne,
    /// No two adjacent marked cells.
    Independent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fill {
    Color,
    Clue,
    Solution,
}

enum Failure {
    Input(String),
    Unsatisfiable,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsatisfiable => Failure::Unsatisfiable,
            Error::InvalidDecomposition(_) | Error::Mismatch(_) | Error::KeyOverflow | Error::InvalidColoring => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Problem {
    Constraints(HlcspInstance),
    Board(Board),
}

struct Loaded {
    graph: HypGraph,
    file: InstanceFile,
}

fn load(path: &Path) -> CliResult<Loaded> {
    let file = InstanceFile::from_json(&read_text(path)?)?;
    let graph = file.to_graph()?;
    Ok(Loaded { graph, file })
}

fn problem(l: &Loaded) -> CliResult<Problem> {
    match (&l.file.hlcsp, &l.file.board) {
        (Some(_), None) => Ok(Problem::Constraints(l.file.to_hlcsp(&l.graph)?)),
        (None, Some(_)) => Ok(Problem::Board(l.file.to_board(&l.graph)?)),
        _ => Err(Failure::Input("the instance needs exactly one of \"hlcsp\" and \"board\"".into())),
    }
}

fn board_colors() -> ColorSet {
    ColorSet::new(["CLEAR", "MINE"]).expect("two distinct names")
}

fn prepare(p: &Problem, seeds: u64) -> CliResult<(Prepared, ColorSet)> {
    Ok(match p {
        Problem::Constraints(inst) => (Prepared::new(inst, seeds, false)?, inst.colors().clone()),
        Problem::Board(b) => (Prepared::new(&minesweeper::encode(b)?, seeds, true)?, board_colors()),
    })
}

fn run(cli: Cli) -> CliResult<()> {
    let seeds = cli.seeds.filter(|&s| s > 0).unwrap_or_else(default_seeds);
    match cli.command {
        Command::Gen { p, q, rings, remove, mines, reveal, constraint, seed, out } => {
            let spec = TilingSpec::new(p, q, rings).with_removed(remove);
            let g = generate_tiling(&spec)?;
            let file = match (mines, constraint) {
                (Some(density), _) => {
                    for (name, x) in [("--mines", density), ("--reveal", reveal)] {
                        if !(0.0..=1.0).contains(&x) {
                            return Err(Failure::Input(format!("{name} must lie in [0, 1]")));
                        }
                    }
                    InstanceFile::from_board(&board_on(g, density, reveal, seed).0)
                }
                (None, Some(preset)) => {
                    let colors = ColorSet::new(["EMPTY", "MARKED"])?;
                    let inst = HlcspInstance::from_predicate(g, colors, |_, _, t| match preset {
                        Preset::AtMostOne => t.iter().filter(|&&x| x == 1).count() <= 1,
                        Preset::Independent => t[0] == 0 || t[1..].iter().all(|&x| x == 0),
                    })?;
                    InstanceFile::from_hlcsp(&inst)
                }
                (None, None) => InstanceFile::from_graph(&g),
            };
            emit(&file.to_json()?, out.as_deref())
        }
        Command::Validate { input } => {
            let l = load(&input)?;
            let report = validate_embedding(&l.graph);
            let mut text = String::new();
            if report.is_valid() {
                text.push_str(&format!(
                    "embedding: valid ({} vertices, {} edges)\n",
                    l.graph.len(),
                    l.graph.edges().len()
                ));
            } else {
                text.push_str(&format!("embedding: {} violations\n", report.violations.len()));
                for v in &report.violations {
                    text.push_str(&format!("  {v:?}\n"));
                }
            }
            let td = build_decomposition(&l.graph, seeds);
            let dreport = validate_decomposition(&l.graph, &td);
            if dreport.is_valid() {
                text.push_str(&format!("decomposition: valid (width {}, {} bags)\n", td.width(), td.len()));
            } else {
                text.push_str(&format!("decomposition: {} violations\n", dreport.violations.len()));
            }
            print!("{text}");
            if !dreport.is_valid() {
                return Err(Failure::Internal("heuristic decomposition failed validation".into()));
            }
            if !report.is_valid() {
                return Err(Failure::Input("the embedding is not valid".into()));
            }
            Ok(())
        }
        Command::Solve { input } => {
            let l = load(&input)?;
            let (prepared, colors) = prepare(&problem(&l)?, seeds)?;
            match prepared.witness()? {
                Some(w) => {
                    println!("SAT");
                    print!("{}", coloring_json(&w, &colors)?);
                }
                None => println!("UNSAT"),
            }
            Ok(())
        }
        Command::Count { input } => {
            let l = load(&input)?;
            let (prepared, _) = prepare(&problem(&l)?, seeds)?;
            println!("{}", prepared.count()?);
            Ok(())
        }
        Command::Sample { input, seed, out } => {
            let l = load(&input)?;
            let (prepared, colors) = prepare(&problem(&l)?, seeds)?;
            let c = prepared.sample(seed)?;
            emit(&coloring_json(&c, &colors)?, out.as_deref())
        }
        Command::Deduce { input } => {
            let l = load(&input)?;
            let Problem::Board(board) = problem(&l)? else {
                return Err(Failure::Input("deduce needs a board instance".into()));
            };
            let result = minesweeper::deduce(&board)?;
            println!("total {}", result.total);
            match result.cells {
                None => println!("INCONSISTENT"),
                Some(cells) => {
                    for (cell, status) in cells {
                        println!("{cell} {}", status.as_str());
                    }
                }
            }
            Ok(())
        }
        Command::Widths { p, q, max_rings } => {
            let specs: Vec<TilingSpec> = (0..=max_rings).map(|r| TilingSpec::new(p, q, r)).collect();
            for (n, w) in width_profile(&specs, seeds)? {
                println!("{n} {w}");
            }
            Ok(())
        }
        Command::Render { input, coloring, fill, radius, labels, out } => {
            let l = load(&input)?;
            let board = match &l.file.board {
                Some(_) => Some(l.file.to_board(&l.graph)?),
                None => None,
            };
            let colors = match &l.file.hlcsp {
                Some(section) => ColorSet::new(section.colors.iter().cloned())?,
                None => board_colors(),
            };
            let solution = match &coloring {
                Some(path) => Some(parse_coloring_json(&read_text(path)?, &colors)?),
                None => None,
            };
            let fill = match fill {
                Some(Fill::Color) => FillRule::ByColor,
                Some(Fill::Clue) => FillRule::ByClue,
                Some(Fill::Solution) => FillRule::BySolution,
                None if board.is_some() && solution.is_some() => FillRule::BySolution,
                None if board.is_some() => FillRule::ByClue,
                None => FillRule::ByColor,
            };
            let overlay = match (&board, &solution) {
                (Some(b), s) => Overlay::Board(b, s.as_ref()),
                (None, Some(c)) => Overlay::Coloring(c),
                (None, None) => Overlay::None,
            };
            let style = RenderStyle { fill, radius_px: radius, labels, ..RenderStyle::default() };
            let svg = render_svg(&l.graph, overlay, &style).map_err(|e| Failure::Input(e.to_string()))?;
            emit(&svg, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsatisfiable) => {
            eprintln!("error: the instance has no solution");
            ExitCode::from(3)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(4)
        }
    }
}
