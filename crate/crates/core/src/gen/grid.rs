use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MAX_GENERATED_STATES;
use crate::error::{Error, Result};
use crate::model::{CmdpBuilder, Instance, StateId};

/// A grid cell as `(column, row)`.
pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoverControl {
    /// Each action fixes a helicopter move and a rover command: one of the
    /// four directions (stochastic) or stay (deterministic).
    #[default]
    Joint,
    /// The rover follows a fixed back-and-forth sweep of the grid; only the
    /// helicopter is controlled. A docked helicopter may ride along.
    Patrol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    /// Probability that the rover slips to one of the two perpendicular
    /// neighbours (half each).
    pub slip: f64,
    pub move_cost: u64,
    pub hover_cost: u64,
    pub capacity: u64,
    /// Helicopter target cells. Empty means `max(1, n / 2)` cells drawn from
    /// `seed`.
    pub targets: Vec<Cell>,
    pub seed: u64,
    pub rover: RoverControl,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n: 3,
            slip: 0.2,
            move_cost: 1,
            hover_cost: 1,
            capacity: 10,
            targets: Vec::new(),
            seed: 0,
            rover: RoverControl::Joint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    N,
    E,
    S,
    W,
}

const DIRS: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

impl Dir {
    fn label(self) -> &'static str {
        match self {
            Dir::N => "N",
            Dir::E => "E",
            Dir::S => "S",
            Dir::W => "W",
        }
    }

    fn perpendicular(self) -> [Dir; 2] {
        match self {
            Dir::N | Dir::S => [Dir::E, Dir::W],
            Dir::E | Dir::W => [Dir::N, Dir::S],
        }
    }

    fn step(self, (x, y): Cell, n: usize) -> Option<Cell> {
        match self {
            Dir::N => y.checked_sub(1).map(|y| (x, y)),
            Dir::S => (y + 1 < n).then_some((x, y + 1)),
            Dir::E => (x + 1 < n).then_some((x + 1, y)),
            Dir::W => x.checked_sub(1).map(|x| (x, y)),
        }
    }
}

/// Sweep direction of the patrolling rover: east along even rows, west
/// along odd rows, one row down at each end, back up from the last cell.
fn patrol_dir((x, y): Cell, n: usize) -> Dir {
    let eastward = y % 2 == 0;
    let at_end = if eastward { x + 1 == n } else { x == 0 };
    match (at_end, y + 1 == n) {
        (false, _) if eastward => Dir::E,
        (false, _) => Dir::W,
        (true, false) => Dir::S,
        (true, true) => Dir::N,
    }
}

/// Rover successor distribution with off-grid moves staying in place.
fn rover_moves(cell: Cell, intent: Dir, slip: f64, n: usize) -> Vec<(Cell, f64)> {
    let mut out: Vec<(Cell, f64)> = Vec::with_capacity(3);
    let mut add = |c: Cell, p: f64| match out.iter_mut().find(|(d, _)| *d == c) {
        Some(entry) => entry.1 += p,
        None => out.push((c, p)),
    };
    add(intent.step(cell, n).unwrap_or(cell), 1.0 - slip);
    for d in intent.perpendicular() {
        add(d.step(cell, n).unwrap_or(cell), slip / 2.0);
    }
    out
}

/// The helicopter/rover grid world with `n^4` states.
///
/// The helicopter moves deterministically and pays for every step,
/// including hovering; the rover moves stochastically for free. States
/// where both share a cell are reload states.
pub fn gen_grid(spec: &GridSpec) -> Result<Instance> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidSpec(format!("grid side must be at least 2, got {n}")));
    }
    if !(spec.slip > 0.0 && spec.slip < 1.0) {
        return Err(Error::InvalidSpec(format!("slip probability must lie in (0, 1), got {}", spec.slip)));
    }
    if spec.move_cost == 0 || spec.hover_cost == 0 {
        return Err(Error::InvalidSpec("move and hover costs must be at least 1".into()));
    }
    let states = n
        .checked_pow(4)
        .filter(|&s| s <= MAX_GENERATED_STATES)
        .ok_or_else(|| Error::InvalidSpec(format!("a grid of side {n} exceeds {MAX_GENERATED_STATES} states")))?;
    for &(x, y) in &spec.targets {
        if x >= n || y >= n {
            return Err(Error::InvalidSpec(format!("target cell ({x}, {y}) is outside the grid")));
        }
    }
    let cells: Vec<Cell> = (0..n * n).map(|i| (i % n, i / n)).collect();
    let index = |(x, y): Cell| y * n + x;
    let target_cells: Vec<Cell> = if spec.targets.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut picked: Vec<Cell> = sample(&mut rng, n * n, (n / 2).max(1)).into_iter().map(|i| cells[i]).collect();
        picked.sort_unstable_by_key(|&c| index(c));
        picked
    } else {
        spec.targets.clone()
    };

    let mut b = CmdpBuilder::new(spec.capacity);
    for &h in &cells {
        for &r in &cells {
            let name = format!("h{}.{}-r{}.{}", h.0, h.1, r.0, r.1);
            if h == r {
                b.add_reload_state(name)?;
            } else {
                b.add_state(name)?;
            }
        }
    }
    debug_assert_eq!(b.num_states(), states);
    let sid = |h: Cell, r: Cell| StateId(index(h) * n * n + index(r));

    let heli_moves: Vec<(Option<Dir>, &str)> =
        DIRS.iter().map(|&d| (Some(d), d.label())).chain([(None, "H")]).collect();
    let joint_intents: Vec<Option<Dir>> = DIRS.iter().map(|&d| Some(d)).chain([None]).collect();

    for &h in &cells {
        for &r in &cells {
            let s = sid(h, r);
            for &(hd, hlabel) in &heli_moves {
                let (h2, cost) = match hd {
                    Some(d) => match d.step(h, n) {
                        Some(c) => (c, spec.move_cost),
                        None => continue,
                    },
                    None => (h, spec.hover_cost),
                };
                match spec.rover {
                    RoverControl::Joint => {
                        for &intent in &joint_intents {
                            let label = format!("{hlabel}/{}", intent.map_or("X", Dir::label));
                            let moves = match intent {
                                Some(d) => rover_moves(r, d, spec.slip, n),
                                None => vec![(r, 1.0)],
                            };
                            b.add_action(s, &label, cost, moves.into_iter().map(|(r2, p)| (sid(h2, r2), p)))?;
                        }
                    }
                    RoverControl::Patrol => {
                        let moves = rover_moves(r, patrol_dir(r, n), spec.slip, n);
                        b.add_action(s, hlabel, cost, moves.into_iter().map(|(r2, p)| (sid(h2, r2), p)))?;
                    }
                }
            }
            if spec.rover == RoverControl::Patrol && h == r {
                let moves = rover_moves(r, patrol_dir(r, n), spec.slip, n);
                b.add_action(s, "ride", spec.hover_cost, moves.into_iter().map(|(r2, p)| (sid(r2, r2), p)))?;
            }
        }
    }

    let targets: Vec<StateId> =
        target_cells.iter().flat_map(|&h| cells.iter().map(move |&r| (h, r))).map(|(h, r)| sid(h, r)).collect();
    let mut targets = targets;
    targets.sort_unstable();
    Ok(Instance::new(b.build(), Some(targets)))
}
