//! Lava gridworld with action slipping.
//!
//! Map characters: `S` start, `G` goal, `L` lava, `#` wall, `.` floor.
//! Every floor/start cell becomes an internal state (row-major order); all
//! `G` cells collapse into one safe absorbing state and all `L` cells into one
//! unsafe absorbing state, appended after the floor states in that order.

use std::fmt;
use std::path::Path;

use crate::error::EnvError;
use crate::mdp::{MdpBuilder, TabularMdp};

/// Default map. The start sits next to the lava and the goal is walled in,
/// so the only safe route is a 13-step loop around the outside.
pub const DEFAULT_LAYOUT: &str = "\
.....
.###.
.#G..
.####
.SL##
";

pub const UP: usize = 0;
pub const DOWN: usize = 1;
pub const LEFT: usize = 2;
pub const RIGHT: usize = 3;
pub const NUM_ACTIONS: usize = 4;

const DELTAS: [(isize, isize); NUM_ACTIONS] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Start,
    Goal,
    Lava,
    Wall,
    Floor,
}

impl Cell {
    pub fn from_char(ch: char) -> Option<Self> {
        Some(match ch {
            'S' => Cell::Start,
            'G' => Cell::Goal,
            'L' => Cell::Lava,
            '#' => Cell::Wall,
            '.' => Cell::Floor,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Cell::Start => 'S',
            Cell::Goal => 'G',
            Cell::Lava => 'L',
            Cell::Wall => '#',
            Cell::Floor => '.',
        }
    }
}

/// A rectangular, validated map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
    start: (usize, usize),
}

impl GridLayout {
    /// Parses a map. Blank lines and trailing whitespace are ignored.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.is_empty() {
            return Err(EnvError::EmptyLayout);
        }
        let cols = lines[0].chars().count();
        let mut cells = Vec::with_capacity(lines.len() * cols);
        let mut starts = Vec::new();
        for (row, line) in lines.iter().enumerate() {
            let width = line.chars().count();
            if width != cols {
                return Err(EnvError::Ragged {
                    row,
                    width,
                    expected: cols,
                });
            }
            for (col, ch) in line.chars().enumerate() {
                let cell = Cell::from_char(ch).ok_or(EnvError::BadChar { ch, row, col })?;
                if cell == Cell::Start {
                    starts.push((row, col));
                }
                cells.push(cell);
            }
        }
        if starts.len() != 1 {
            return Err(EnvError::StartCount(starts.len()));
        }
        if !cells.contains(&Cell::Goal) {
            return Err(EnvError::NoGoal);
        }
        if !cells.contains(&Cell::Lava) {
            return Err(EnvError::NoLava);
        }
        Ok(Self {
            rows: lines.len(),
            cols,
            cells,
            start: starts[0],
        })
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Result<Self, EnvError>> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn start(&self) -> (usize, usize) {
        self.start
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.cols + col]
    }

    /// Cell reached by moving one step in `action`; walls and edges block.
    pub fn step(&self, (row, col): (usize, usize), action: usize) -> (usize, usize) {
        let (dr, dc) = DELTAS[action];
        let r = row as isize + dr;
        let c = col as isize + dc;
        if r < 0 || c < 0 || r >= self.rows as isize || c >= self.cols as isize {
            return (row, col);
        }
        let (r, c) = (r as usize, c as usize);
        if self.cell(r, c) == Cell::Wall {
            (row, col)
        } else {
            (r, c)
        }
    }
}

impl Default for GridLayout {
    fn default() -> Self {
        Self::parse(DEFAULT_LAYOUT).expect("default layout is valid")
    }
}

impl fmt::Display for GridLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.cell(r, c).to_char())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub layout: GridLayout,
    pub slip_prob: f64,
    pub step_reward: f64,
    pub goal_reward: f64,
    pub lava_entry_reward: f64,
}

impl GridSpec {
    pub fn new(layout: GridLayout, slip_prob: f64) -> Self {
        Self {
            layout,
            slip_prob,
            step_reward: -0.1,
            goal_reward: 1.0,
            lava_entry_reward: 0.0,
        }
    }

    pub fn with_slip(&self, slip_prob: f64) -> Self {
        Self {
            slip_prob,
            ..self.clone()
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(GridLayout::default(), 0.25)
    }
}

/// A built gridworld: the MDP plus the cell behind every internal state.
#[derive(Debug, Clone)]
pub struct GridWorld {
    pub mdp: TabularMdp,
    pub positions: Vec<(usize, usize)>,
    pub goal_state: usize,
    pub lava_state: usize,
}

impl GridWorld {
    pub fn build(spec: &GridSpec) -> Result<Self, EnvError> {
        let sp = spec.slip_prob;
        if !(0.0..=1.0).contains(&sp) {
            return Err(EnvError::Probability {
                name: "slip",
                value: sp,
            });
        }
        for (name, r) in [
            ("step reward", spec.step_reward),
            ("goal reward", spec.goal_reward),
            ("lava entry reward", spec.lava_entry_reward),
        ] {
            if !r.is_finite() {
                return Err(EnvError::NonFinite(name));
            }
        }
        let layout = &spec.layout;
        let mut index_of = vec![usize::MAX; layout.rows * layout.cols];
        let mut positions = Vec::new();
        for r in 0..layout.rows {
            for c in 0..layout.cols {
                if matches!(layout.cell(r, c), Cell::Floor | Cell::Start) {
                    index_of[r * layout.cols + c] = positions.len();
                    positions.push((r, c));
                }
            }
        }
        let goal_state = positions.len();
        let lava_state = goal_state + 1;
        let n = lava_state + 1;

        let mut b = MdpBuilder::new(n, NUM_ACTIONS);
        for (s, &pos) in positions.iter().enumerate() {
            for commanded in 0..NUM_ACTIONS {
                let mut row = vec![0.0; n];
                for executed in 0..NUM_ACTIONS {
                    let w = if executed == commanded { 1.0 - sp } else { 0.0 }
                        + sp / NUM_ACTIONS as f64;
                    if w == 0.0 {
                        continue;
                    }
                    let (r, c) = layout.step(pos, executed);
                    let (next, reward) = match layout.cell(r, c) {
                        Cell::Goal => (goal_state, spec.goal_reward),
                        Cell::Lava => (lava_state, spec.lava_entry_reward),
                        _ => (index_of[r * layout.cols + c], spec.step_reward),
                    };
                    row[next] += w;
                    b.reward(s, commanded, next, reward)?;
                }
                for (next, p) in row.into_iter().enumerate() {
                    if p > 0.0 {
                        b.transition(s, commanded, next, p)?;
                    }
                }
            }
        }
        let start = index_of[layout.start.0 * layout.cols + layout.start.1];
        b.goals([goal_state, lava_state])
            .unsafe_goals([lava_state])
            .initial_state(start);
        Ok(Self {
            mdp: b.build()?,
            positions,
            goal_state,
            lava_state,
        })
    }

    pub fn state_at(&self, pos: (usize, usize)) -> Option<usize> {
        self.positions.iter().position(|&p| p == pos)
    }
}

/// Builds just the MDP of a gridworld.
pub fn build_gridworld(spec: &GridSpec) -> Result<TabularMdp, EnvError> {
    Ok(GridWorld::build(spec)?.mdp)
}
