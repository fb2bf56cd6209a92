//! Backtracking construction of colorings that avoid monochromatic
//! homothetic copies of a target configuration.
//!
//! The search assigns cells in a fixed row-major order. After each
//! assignment, propagation forbids at the final cell of every almost
//! complete placement the color that would finish it monochromatically;
//! a placement is examined exactly when its second-to-last cell (in
//! assignment order) is colored, at which point all of its other cells
//! are already decided. Symmetry breaking can pin the first cell's color
//! and restrict color choices to first-appearance order.
//!
//! Parallel mode splits the tree on the color choices of the first few
//! cells. In deterministic mode the subtree that is first in sequential
//! order wins, so the witness is identical across runs and worker counts.

use crate::config::Configuration;
use crate::grid::{GridColoring, GridError, MAX_COLORS};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("avoidance target needs at least two points; a single point is trivially unavoidable")]
    TrivialTarget,
    #[error("solver needs at least 2 and at most {MAX_COLORS} colors, got {0}")]
    ColorCount(u32),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// The static order in which cells are assigned.
///
/// Row-major is the plain scan. The stripe order visits cells by ascending
/// `x + step·y` (ties by `y`): the four corners of any square take
/// `x + step·y` values in arithmetic progression, so under this order the
/// cells coupled by a constraint sit close together in assignment order and
/// backtracking repairs bad choices locally instead of unwinding whole
/// rows. Either order is static and complete; only the visiting sequence
/// (and hence the first witness found) changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellOrder {
    RowMajor,
    Stripes { step: u32 },
}

/// Search controls. The defaults are the deterministic sequential search
/// with propagation, first-cell pinning, and the stripe-extension value
/// bias.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Pin the first assigned cell to color 0.
    pub fix_first_cell: bool,
    /// Only allow a color once every smaller color has appeared earlier
    /// (canonicity under color permutation).
    pub color_canonical: bool,
    /// Forbid colors that would complete a monochromatic copy; disabling
    /// falls back to rejecting completed copies at their final cell.
    pub propagation: bool,
    /// Static assignment order.
    pub cell_order: CellOrder,
    /// Try first the color of the nearest earlier cell on the same
    /// `x + step·y` stripe, extending stripe-shaped partial colorings.
    /// A pure value-order preference: verdicts are unaffected.
    pub stripe_bias: Option<u32>,
    /// Before the full search, look for an avoiding coloring that is
    /// constant on `x + q·y` stripes for small `q`. Stripes turn homothetic
    /// copies into one-dimensional homothetic copies of the target's stripe
    /// pattern, so each `q` reduces to a tiny 1-D instance; a hit is lifted
    /// back to the grid and re-verified. Only the satisfiable answer can
    /// come from this phase; unsat is still certified by the full search.
    pub stripe_presolve: bool,
    /// Total node budget across all workers.
    pub node_budget: Option<u64>,
    /// Worker count; 1 runs the plain sequential search.
    pub threads: usize,
    /// Reproducible witnesses across runs and worker counts. Holds whenever
    /// the search completes within budget and restarts are off.
    pub deterministic: bool,
    /// Seeded per-cell shuffle of the fallback color order, for witness
    /// diversity via randomized tie-breaking.
    pub seed: Option<u64>,
    /// Restart with doubled node caps and reshuffled color orders, starting
    /// from this cap. Only a completed (non-capped) run can report unsat.
    pub restart_base: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            fix_first_cell: true,
            color_canonical: false,
            propagation: true,
            cell_order: CellOrder::RowMajor,
            stripe_bias: Some(5),
            stripe_presolve: true,
            node_budget: None,
            threads: 1,
            deterministic: true,
            seed: None,
            restart_base: None,
        }
    }
}

/// A validated avoidance problem: color `width × height` in `colors` colors
/// with no monochromatic homothetic copy of `target`.
#[derive(Clone, Debug)]
pub struct AvoidanceInstance {
    width: u32,
    height: u32,
    colors: u32,
    target: Configuration,
    options: SolveOptions,
}

impl AvoidanceInstance {
    pub fn new(
        width: u32,
        height: u32,
        colors: u32,
        target: Configuration,
        options: SolveOptions,
    ) -> Result<Self, SolveError> {
        if width == 0 || height == 0 {
            return Err(GridError::EmptyDimensions { width, height }.into());
        }
        if !(2..=MAX_COLORS).contains(&colors) {
            return Err(SolveError::ColorCount(colors));
        }
        if target.len() < 2 {
            return Err(SolveError::TrivialTarget);
        }
        Ok(AvoidanceInstance { width, height, colors, target, options })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn target(&self) -> &Configuration {
        &self.target
    }

    pub fn options(&self) -> &SolveOptions {
        &self.options
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub propagations: u64,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Satisfiable { coloring: GridColoring, stats: SolveStats },
    ExhaustedUnsat { stats: SolveStats },
    BudgetExceeded { stats: SolveStats },
}

impl SolveOutcome {
    pub fn stats(&self) -> &SolveStats {
        match self {
            SolveOutcome::Satisfiable { stats, .. }
            | SolveOutcome::ExhaustedUnsat { stats }
            | SolveOutcome::BudgetExceeded { stats } => stats,
        }
    }

    pub fn coloring(&self) -> Option<&GridColoring> {
        match self {
            SolveOutcome::Satisfiable { coloring, .. } => Some(coloring),
            _ => None,
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        matches!(self, SolveOutcome::Satisfiable { .. })
    }

    /// Single-line `key=value` stats record.
    pub fn stats_line(&self) -> String {
        let outcome = match self {
            SolveOutcome::Satisfiable { .. } => "sat",
            SolveOutcome::ExhaustedUnsat { .. } => "unsat",
            SolveOutcome::BudgetExceeded { .. } => "budget",
        };
        let s = self.stats();
        format!(
            "nodes={} propagations={} millis={} outcome={}",
            s.nodes, s.propagations, s.millis, outcome
        )
    }
}

const UNASSIGNED: u8 = u8::MAX;

/// One in-bounds homothetic image. `others` drops the row-major-last cell,
/// serving the propagation-free completion check.
struct Placement {
    cells: Vec<u32>,
    others: Vec<u32>,
}

struct Problem {
    n: usize,
    k: u32,
    full_mask: u64,
    placements: Vec<Placement>,
    /// Placements containing each cell.
    by_cell: Vec<Vec<u32>>,
    /// Placements whose last assigned cell is this cell (no-propagation path).
    by_last: Vec<Vec<u32>>,
    fix_first_cell: bool,
    color_canonical: bool,
    propagation: bool,
    /// Static visit order: `order[depth]` is the cell assigned at `depth`.
    order: Vec<u32>,
    /// Nearest earlier-in-order cell on the same stripe, per cell.
    bias_source: Vec<Option<u32>>,
    /// Flattened per-cell color order, `n × k`; empty means natural order.
    value_order: Vec<u8>,
}

impl Problem {
    fn build(inst: &AvoidanceInstance, seed: Option<u64>) -> Problem {
        let w = i64::from(inst.width);
        let h = i64::from(inst.height);
        let n = (inst.width * inst.height) as usize;
        let (mx, my) = inst.target.span();
        debug_assert!(mx > 0 || my > 0, "targets have at least two distinct points");
        let dx = if mx > 0 { (w - 1) / mx } else { i64::MAX };
        let dy = if my > 0 { (h - 1) / my } else { i64::MAX };
        let max_d = dx.min(dy);

        let mut placements = Vec::new();
        let mut by_cell = vec![Vec::new(); n];
        let mut by_last = vec![Vec::new(); n];
        for d in 1..=max_d {
            for ty in 0..=(h - 1 - d * my) {
                for tx in 0..=(w - 1 - d * mx) {
                    let mut cells: Vec<u32> = inst
                        .target
                        .points()
                        .iter()
                        .map(|&(px, py)| ((ty + d * py) * w + tx + d * px) as u32)
                        .collect();
                    cells.sort_unstable();
                    let id = placements.len() as u32;
                    for &cell in &cells {
                        by_cell[cell as usize].push(id);
                    }
                    let mut others = cells.clone();
                    let last = others.pop().expect("non-empty");
                    by_last[last as usize].push(id);
                    placements.push(Placement { cells, others });
                }
            }
        }

        let k = inst.colors;
        let value_order = match seed {
            None => Vec::new(),
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut order = Vec::with_capacity(n * k as usize);
                for _ in 0..n {
                    let mut perm: Vec<u8> = (0..k as u8).collect();
                    perm.shuffle(&mut rng);
                    order.extend_from_slice(&perm);
                }
                order
            }
        };

        let width = inst.width as usize;
        let order: Vec<u32> = match inst.options.cell_order {
            CellOrder::RowMajor => (0..n as u32).collect(),
            CellOrder::Stripes { step } => {
                let mut cells: Vec<u32> = (0..n as u32).collect();
                let s = step as usize;
                cells.sort_by_key(|&cell| {
                    let x = cell as usize % width;
                    let y = cell as usize / width;
                    (x + s * y, y)
                });
                cells
            }
        };
        let bias_source = match inst.options.stripe_bias {
            None => vec![None; n],
            Some(step) => {
                let s = step as usize;
                let mut source = vec![None; n];
                let mut last_on_stripe = vec![None; width + s * inst.height as usize + 1];
                for &cell in &order {
                    let x = cell as usize % width;
                    let y = cell as usize / width;
                    let stripe = x + s * y;
                    source[cell as usize] = last_on_stripe[stripe];
                    last_on_stripe[stripe] = Some(cell);
                }
                source
            }
        };

        Problem {
            n,
            k,
            full_mask: (1u64 << k) - 1,
            placements,
            by_cell,
            by_last,
            fix_first_cell: inst.options.fix_first_cell,
            color_canonical: inst.options.color_canonical,
            propagation: inst.options.propagation,
            order,
            bias_source,
            value_order,
        }
    }

    #[inline]
    fn color_at(&self, cell: usize, rank: usize) -> u8 {
        if self.value_order.is_empty() {
            rank as u8
        } else {
            self.value_order[cell * self.k as usize + rank]
        }
    }

    /// Color extending the stripe through this cell, read from the nearest
    /// earlier cell on the same stripe (always already assigned).
    #[inline]
    fn stripe_preferred(&self, cell: usize, colors: &[u8]) -> Option<u8> {
        self.bias_source[cell].map(|source| {
            let c = colors[source as usize];
            debug_assert_ne!(c, UNASSIGNED);
            c
        })
    }

    fn available_mask(&self, depth: usize, forbidden: u64, max_used: i32) -> u64 {
        let mut avail = !forbidden & self.full_mask;
        if self.fix_first_cell && depth == 0 {
            avail &= 1;
        }
        if self.color_canonical {
            let limit = (max_used + 2).min(self.k as i32) as u32;
            avail &= (1u64 << limit) - 1;
        }
        avail
    }
}

/// Relaxed-accuracy counters shared by workers, plus the cooperative
/// early-exit signals.
struct Shared {
    nodes: AtomicU64,
    propagations: AtomicU64,
    node_cap: Option<u64>,
    /// Lowest task index that found a solution; `u64::MAX` while none.
    best_found: AtomicU64,
    deterministic: bool,
}

impl Shared {
    fn new(node_cap: Option<u64>, deterministic: bool) -> Shared {
        Shared {
            nodes: AtomicU64::new(0),
            propagations: AtomicU64::new(0),
            node_cap,
            best_found: AtomicU64::new(u64::MAX),
            deterministic,
        }
    }
}

enum Walk {
    Found,
    Exhausted,
    Budget,
    /// A lower-indexed task already holds the answer.
    Superseded,
}

enum TrailOp {
    SetColor(u32),
    Forbid(u32, u64),
}

struct Worker<'a> {
    problem: &'a Problem,
    shared: &'a Shared,
    task_index: u64,
    colors: Vec<u8>,
    forbidden: Vec<u64>,
    /// Per placement and color: cells currently holding that color.
    color_counts: Vec<u16>,
    /// Per placement: cells currently colored.
    colored: Vec<u16>,
    trail: Vec<TrailOp>,
    /// Implied single-color cells awaiting cascade.
    pending: Vec<(u32, u8)>,
    local_nodes: u64,
    local_props: u64,
    seen_shared_nodes: u64,
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Problem, shared: &'a Shared, task_index: u64) -> Self {
        Worker {
            problem,
            shared,
            task_index,
            colors: vec![UNASSIGNED; problem.n],
            forbidden: vec![0u64; problem.n],
            color_counts: vec![0u16; problem.placements.len() * problem.k as usize],
            colored: vec![0u16; problem.placements.len()],
            trail: Vec::new(),
            pending: Vec::new(),
            local_nodes: 0,
            local_props: 0,
            seen_shared_nodes: 0,
        }
    }

    fn flush_counters(&mut self) {
        self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed);
        self.shared.propagations.fetch_add(self.local_props, Ordering::Relaxed);
        self.local_nodes = 0;
        self.local_props = 0;
    }

    /// Per-node bookkeeping; returns a stop reason when the budget is gone
    /// or another task already holds the answer.
    #[inline]
    fn note_node(&mut self) -> Option<Walk> {
        self.local_nodes += 1;
        if let Some(cap) = self.shared.node_cap {
            if self.seen_shared_nodes + self.local_nodes >= cap {
                return self.checkpoint();
            }
        }
        if self.local_nodes & 0x3FF == 0 {
            return self.checkpoint();
        }
        None
    }

    /// Periodic budget / supersession check; `None` means keep searching.
    fn checkpoint(&mut self) -> Option<Walk> {
        self.flush_counters();
        self.seen_shared_nodes = self.shared.nodes.load(Ordering::Relaxed);
        if let Some(cap) = self.shared.node_cap {
            if self.seen_shared_nodes >= cap {
                return Some(Walk::Budget);
            }
        }
        let best = self.shared.best_found.load(Ordering::Relaxed);
        if best < self.task_index || (!self.shared.deterministic && best != u64::MAX) {
            return Some(Walk::Superseded);
        }
        None
    }

    /// Colors `cell` and cascades propagation: a placement with all but one
    /// cell in one color forbids that color at the remaining cell, and a
    /// cell left with a single color is set and propagated in turn. Returns
    /// false when a monochromatic copy completes or a cell runs out of
    /// colors.
    fn assign(&mut self, cell: usize, color: u8) -> bool {
        if !self.problem.propagation {
            // Completion check only: the trail and counters stay untouched,
            // the caller clears the cell on backtrack.
            self.colors[cell] = color;
            for &pid in &self.problem.by_last[cell] {
                let p = &self.problem.placements[pid as usize];
                if p.others.iter().all(|&u| self.colors[u as usize] == color) {
                    return false;
                }
            }
            return true;
        }
        self.pending.clear();
        if !self.set_color(cell as u32, color) {
            return false;
        }
        while let Some((u, c)) = self.pending.pop() {
            match self.colors[u as usize] {
                UNASSIGNED => {
                    if !self.set_color(u, c) {
                        return false;
                    }
                }
                already if already == c => {}
                _ => return false,
            }
        }
        true
    }

    fn set_color(&mut self, cell: u32, color: u8) -> bool {
        debug_assert_eq!(self.colors[cell as usize], UNASSIGNED);
        self.colors[cell as usize] = color;
        self.trail.push(TrailOp::SetColor(cell));
        let k = self.problem.k as usize;
        // Bump every counter before acting on any of them, so the trail
        // undo (which decrements them all) stays symmetric on conflicts.
        for &pid in &self.problem.by_cell[cell as usize] {
            self.colored[pid as usize] += 1;
            self.color_counts[pid as usize * k + color as usize] += 1;
        }
        for idx in 0..self.problem.by_cell[cell as usize].len() {
            let pid = self.problem.by_cell[cell as usize][idx] as usize;
            let size = self.problem.placements[pid].cells.len() as u16;
            let cnt = self.color_counts[pid * k + color as usize];
            if cnt == size {
                return false;
            }
            if cnt == size - 1 && self.colored[pid] == size - 1 {
                let open = self.problem.placements[pid]
                    .cells
                    .iter()
                    .copied()
                    .find(|&u| self.colors[u as usize] == UNASSIGNED)
                    .expect("one cell is uncolored");
                if !self.forbid(open, color) {
                    return false;
                }
            }
        }
        true
    }

    fn forbid(&mut self, cell: u32, color: u8) -> bool {
        let bit = 1u64 << color;
        let mask = self.forbidden[cell as usize];
        if mask & bit != 0 {
            return true;
        }
        self.trail.push(TrailOp::Forbid(cell, mask));
        let mask = mask | bit;
        self.forbidden[cell as usize] = mask;
        self.local_props += 1;
        let avail = !mask & self.problem.full_mask;
        if avail == 0 {
            return false;
        }
        if avail & (avail - 1) == 0 {
            self.pending.push((cell, avail.trailing_zeros() as u8));
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let k = self.problem.k as usize;
        while self.trail.len() > mark {
            match self.trail.pop().expect("mark within trail") {
                TrailOp::Forbid(cell, prev) => self.forbidden[cell as usize] = prev,
                TrailOp::SetColor(cell) => {
                    let color = self.colors[cell as usize] as usize;
                    self.colors[cell as usize] = UNASSIGNED;
                    for &pid in &self.problem.by_cell[cell as usize] {
                        self.colored[pid as usize] -= 1;
                        self.color_counts[pid as usize * k + color] -= 1;
                    }
                }
            }
        }
    }

    fn dfs(&mut self, depth: usize, max_used: i32) -> Walk {
        if depth == self.problem.n {
            return Walk::Found;
        }
        let cell = self.problem.order[depth] as usize;
        // Cells implied by earlier propagation carry no branching choice.
        let implied = self.colors[cell];
        if implied != UNASSIGNED {
            return self.dfs(depth + 1, max_used.max(i32::from(implied)));
        }
        let avail = self.problem.available_mask(depth, self.forbidden[cell], max_used);
        if avail == 0 {
            return Walk::Exhausted;
        }
        let preferred = self.problem.stripe_preferred(cell, &self.colors);
        for rank in 0..=self.problem.k as usize {
            let c = match (rank, preferred) {
                (0, Some(c)) => c,
                (0, None) => continue,
                (_, pref) => {
                    let c = self.problem.color_at(cell, rank - 1);
                    if pref == Some(c) {
                        continue;
                    }
                    c
                }
            };
            if avail & (1u64 << c) == 0 {
                continue;
            }
            if let Some(stop) = self.note_node() {
                return stop;
            }
            let mark = self.trail.len();
            if self.assign(cell, c) {
                match self.dfs(depth + 1, max_used.max(i32::from(c))) {
                    Walk::Exhausted => {}
                    found_or_stop => return found_or_stop,
                }
            }
            self.undo_to(mark);
            if !self.problem.propagation {
                self.colors[cell] = UNASSIGNED;
            }
        }
        Walk::Exhausted
    }

    /// Replays a fixed color prefix (in visit order), then searches the
    /// remaining cells.
    fn run(&mut self, prefix: &[u8]) -> Walk {
        let mut max_used = -1i32;
        for (depth, &c) in prefix.iter().enumerate() {
            let cell = self.problem.order[depth] as usize;
            match self.colors[cell] {
                UNASSIGNED => {}
                implied if implied == c => {
                    max_used = max_used.max(i32::from(c));
                    continue;
                }
                _ => return Walk::Exhausted,
            }
            let avail = self.problem.available_mask(depth, self.forbidden[cell], max_used);
            if avail & (1u64 << c) == 0 {
                return Walk::Exhausted;
            }
            if let Some(stop) = self.note_node() {
                return stop;
            }
            if !self.assign(cell, c) {
                return Walk::Exhausted;
            }
            max_used = max_used.max(i32::from(c));
        }
        let walk = self.dfs(prefix.len(), max_used);
        self.flush_counters();
        walk
    }
}

/// Enumerates the color prefixes of the first `depth` cells in exact
/// sequential search order, honoring the symmetry-breaking flags.
fn prefixes(problem: &Problem, depth: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(depth);
    let mut colors = vec![UNASSIGNED; problem.n];
    fn rec(
        problem: &Problem,
        depth: usize,
        current: &mut Vec<u8>,
        colors: &mut Vec<u8>,
        max_used: i32,
        out: &mut Vec<Vec<u8>>,
    ) {
        if current.len() == depth {
            out.push(current.clone());
            return;
        }
        let pos = current.len();
        let cell = problem.order[pos] as usize;
        let avail = problem.available_mask(pos, 0, max_used);
        let preferred = problem.stripe_preferred(cell, colors);
        for rank in 0..=problem.k as usize {
            let c = match (rank, preferred) {
                (0, Some(c)) => c,
                (0, None) => continue,
                (_, pref) => {
                    let c = problem.color_at(cell, rank - 1);
                    if pref == Some(c) {
                        continue;
                    }
                    c
                }
            };
            if avail & (1u64 << c) == 0 {
                continue;
            }
            current.push(c);
            colors[cell] = c;
            rec(problem, depth, current, colors, max_used.max(i32::from(c)), out);
            current.pop();
            colors[cell] = UNASSIGNED;
        }
    }
    rec(problem, depth, &mut current, &mut colors, -1, &mut out);
    out
}

fn outcome_from(
    walk_sat: Option<Vec<u8>>,
    budget_hit: bool,
    inst: &AvoidanceInstance,
    shared: &Shared,
    started: Instant,
) -> SolveOutcome {
    let stats = SolveStats {
        nodes: shared.nodes.load(Ordering::Relaxed),
        propagations: shared.propagations.load(Ordering::Relaxed),
        millis: started.elapsed().as_millis(),
    };
    match walk_sat {
        Some(cells) => {
            let coloring = GridColoring::new(inst.width, inst.height, inst.colors, cells)
                .expect("search assigns valid colors");
            SolveOutcome::Satisfiable { coloring, stats }
        }
        None if budget_hit => SolveOutcome::BudgetExceeded { stats },
        None => SolveOutcome::ExhaustedUnsat { stats },
    }
}

fn solve_once(inst: &AvoidanceInstance, seed: Option<u64>, node_cap: Option<u64>) -> SolveOutcome {
    let started = Instant::now();
    let problem = Problem::build(inst, seed);
    let threads = inst.options.threads.max(1);
    let shared = Shared::new(node_cap, inst.options.deterministic);

    #[cfg(feature = "parallel")]
    if threads > 1 && problem.n > 1 {
        return solve_parallel(inst, &problem, &shared, threads, started);
    }

    let mut worker = Worker::new(&problem, &shared, 0);
    let walk = worker.run(&[]);
    let sat = match walk {
        Walk::Found => Some(worker.colors.clone()),
        _ => None,
    };
    outcome_from(sat, matches!(walk, Walk::Budget), inst, &shared, started)
}

#[cfg(feature = "parallel")]
fn solve_parallel(
    inst: &AvoidanceInstance,
    problem: &Problem,
    shared: &Shared,
    threads: usize,
    started: Instant,
) -> SolveOutcome {
    use rayon::prelude::*;
    use std::sync::atomic::AtomicBool;

    // Split so that there are comfortably more subtrees than workers.
    let mut depth = 1usize;
    let mut tasks = if problem.fix_first_cell || problem.color_canonical { 1u64 } else { problem.k as u64 };
    while depth < problem.n && tasks < (threads as u64) * 8 && tasks <= 4096 {
        depth += 1;
        tasks = tasks.saturating_mul(problem.k as u64);
    }
    let prefixes = prefixes(problem, depth.min(problem.n));

    let budget_hit = AtomicBool::new(false);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(_) => {
            let mut worker = Worker::new(problem, shared, 0);
            let walk = worker.run(&[]);
            let sat = matches!(walk, Walk::Found).then(|| worker.colors.clone());
            return outcome_from(sat, matches!(walk, Walk::Budget), inst, shared, started);
        }
    };

    let found = pool.install(|| {
        let search_one = |(idx, prefix): (usize, &Vec<u8>)| -> Option<Vec<u8>> {
            let mut worker = Worker::new(problem, shared, idx as u64);
            match worker.run(prefix) {
                Walk::Found => {
                    shared.best_found.fetch_min(idx as u64, Ordering::SeqCst);
                    Some(worker.colors.clone())
                }
                Walk::Budget => {
                    budget_hit.store(true, Ordering::Relaxed);
                    None
                }
                Walk::Exhausted | Walk::Superseded => None,
            }
        };
        if inst.options.deterministic {
            prefixes.par_iter().enumerate().find_map_first(search_one)
        } else {
            prefixes.par_iter().enumerate().find_map_any(search_one)
        }
    });

    // A found witness outranks budget exhaustion elsewhere in the tree.
    let budget = found.is_none() && budget_hit.load(Ordering::Relaxed);
    outcome_from(found, budget, inst, shared, started)
}

/// Per-stripe-direction node cap during the presolve phase.
const PRESOLVE_STEP_CAP: u64 = 5_000_000;
/// Widest 1-D instance the presolve will build.
const PRESOLVE_MAX_WIDTH: u32 = 1 << 14;

/// Searches stripe-constant colorings `cell(x, y) = f(x + q·y)` for
/// ascending `q`. Linearity maps a homothety with dilation `d` to a 1-D
/// homothety with the same dilation of the target's stripe pattern, so any
/// 1-D avoiding `f` lifts to a candidate grid, which is re-verified before
/// being returned.
fn stripe_presolve(inst: &AvoidanceInstance, budget: &mut PresolveSpend) -> Option<GridColoring> {
    for q in 1..i64::from(inst.width) {
        let pattern: std::collections::BTreeSet<i64> =
            inst.target.points().iter().map(|&(px, py)| px + q * py).collect();
        if pattern.len() < 2 {
            continue;
        }
        let width = (i64::from(inst.width) - 1) + q * (i64::from(inst.height) - 1) + 1;
        if width > i64::from(PRESOLVE_MAX_WIDTH) {
            break;
        }
        let sub_target = match Configuration::new(pattern.iter().map(|&g| (g, 0))) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let cap = match budget.remaining() {
            Some(0) => return None,
            Some(rem) => PRESOLVE_STEP_CAP.min(rem),
            None => PRESOLVE_STEP_CAP,
        };
        let sub_options = SolveOptions {
            fix_first_cell: inst.options.fix_first_cell,
            color_canonical: inst.options.color_canonical,
            node_budget: Some(cap),
            stripe_bias: None,
            stripe_presolve: false,
            ..SolveOptions::default()
        };
        let sub = match AvoidanceInstance::new(
            width as u32,
            1,
            inst.colors,
            sub_target,
            sub_options,
        ) {
            Ok(sub) => sub,
            Err(_) => continue,
        };
        let outcome = solve_avoidance(&sub);
        budget.add(outcome.stats());
        if let SolveOutcome::Satisfiable { coloring: stripes, .. } = outcome {
            let lifted = GridColoring::from_fn(inst.width, inst.height, inst.colors, |x, y| {
                stripes.cell((i64::from(x) + q * i64::from(y)) as u32, 0)
            })
            .expect("stripe lift stays in range");
            // The 1-D dilation range can differ from the grid's by rounding,
            // so the lift is accepted only after a direct re-check.
            if crate::check::verify_avoidance(&lifted, &inst.target) {
                return Some(lifted);
            }
        }
    }
    None
}

/// Node/propagation spend of the presolve phase, folded into the final stats.
struct PresolveSpend {
    nodes: u64,
    propagations: u64,
    budget: Option<u64>,
}

impl PresolveSpend {
    fn add(&mut self, stats: &SolveStats) {
        self.nodes += stats.nodes;
        self.propagations += stats.propagations;
    }

    fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.nodes))
    }
}

/// Searches for an avoiding coloring of the instance, or certifies that
/// none exists by completing the (symmetry-reduced) search.
pub fn solve_avoidance(inst: &AvoidanceInstance) -> SolveOutcome {
    let opts = &inst.options;
    let started = Instant::now();
    let mut spend =
        PresolveSpend { nodes: 0, propagations: 0, budget: opts.node_budget };
    if opts.stripe_presolve && inst.height >= 2 && inst.width >= 2 {
        if let Some(coloring) = stripe_presolve(inst, &mut spend) {
            let stats = SolveStats {
                nodes: spend.nodes,
                propagations: spend.propagations,
                millis: started.elapsed().as_millis(),
            };
            return SolveOutcome::Satisfiable { coloring, stats };
        }
    }
    let remaining_budget = spend.remaining();
    let fold_spend = |outcome: SolveOutcome| -> SolveOutcome {
        let stats = SolveStats {
            nodes: spend.nodes + outcome.stats().nodes,
            propagations: spend.propagations + outcome.stats().propagations,
            millis: started.elapsed().as_millis(),
        };
        match outcome {
            SolveOutcome::Satisfiable { coloring, .. } => {
                SolveOutcome::Satisfiable { coloring, stats }
            }
            SolveOutcome::ExhaustedUnsat { .. } => SolveOutcome::ExhaustedUnsat { stats },
            SolveOutcome::BudgetExceeded { .. } => SolveOutcome::BudgetExceeded { stats },
        }
    };
    if matches!(remaining_budget, Some(0)) {
        return fold_spend(SolveOutcome::BudgetExceeded {
            stats: SolveStats::default(),
        });
    }
    let outcome = match opts.restart_base {
        None => solve_once(inst, opts.seed, remaining_budget),
        Some(base) => {
            let restart_started = Instant::now();
            let mut total_nodes = 0u64;
            let mut total_props = 0u64;
            let mut attempt = 0u32;
            loop {
                let cap =
                    if attempt >= 40 { u64::MAX } else { base.saturating_mul(1u64 << attempt) };
                let cap = match remaining_budget {
                    Some(global) => cap.min(global.saturating_sub(total_nodes)),
                    None => cap,
                };
                let seed = opts.seed.unwrap_or(0x5eed).wrapping_add(
                    u64::from(attempt).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                );
                let outcome = solve_once(inst, Some(seed), Some(cap));
                total_nodes += outcome.stats().nodes;
                total_props += outcome.stats().propagations;
                let stats = SolveStats {
                    nodes: total_nodes,
                    propagations: total_props,
                    millis: restart_started.elapsed().as_millis(),
                };
                match outcome {
                    SolveOutcome::Satisfiable { coloring, .. } => {
                        break SolveOutcome::Satisfiable { coloring, stats };
                    }
                    SolveOutcome::ExhaustedUnsat { .. } => {
                        break SolveOutcome::ExhaustedUnsat { stats };
                    }
                    SolveOutcome::BudgetExceeded { .. } => {
                        if let Some(global) = remaining_budget {
                            if total_nodes >= global {
                                break SolveOutcome::BudgetExceeded { stats };
                            }
                        }
                        attempt += 1;
                    }
                }
            }
        }
    };
    fold_spend(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{count_avoiding, verify_avoidance};

    fn inst(w: u32, h: u32, k: u32, target: Configuration, opts: SolveOptions) -> AvoidanceInstance {
        AvoidanceInstance::new(w, h, k, target, opts).unwrap()
    }

    #[test]
    fn rejects_single_point_targets_distinctly() {
        let single = Configuration::new([(0, 0)]).unwrap();
        let err = AvoidanceInstance::new(2, 2, 2, single, SolveOptions::default()).unwrap_err();
        assert!(matches!(err, SolveError::TrivialTarget));
    }

    #[test]
    fn two_cell_domino_instance_colors_cells_differently() {
        let i = inst(2, 1, 2, Configuration::domino(), SolveOptions::default());
        let out = solve_avoidance(&i);
        let g = out.coloring().expect("satisfiable");
        assert_ne!(g.cell(0, 0), g.cell(1, 0));
        assert!(verify_avoidance(g, &Configuration::domino()));
    }

    #[test]
    fn three_wide_domino_instance_is_unsat() {
        // Two colors cannot keep all pairs in a 3-cell row distinct.
        let i = inst(3, 1, 2, Configuration::domino(), SolveOptions::default());
        assert!(matches!(solve_avoidance(&i), SolveOutcome::ExhaustedUnsat { .. }));
    }

    #[test]
    fn verdicts_match_exhaustive_counts_on_small_squares() {
        let sq = Configuration::square();
        for (w, h) in [(2, 2), (3, 3), (2, 4), (4, 3)] {
            let i = inst(w, h, 2, sq.clone(), SolveOptions::default());
            let sat = solve_avoidance(&i).is_satisfiable();
            let count = count_avoiding(w, h, 2, &sq).unwrap();
            assert_eq!(sat, count > 0, "{w}x{h}");
        }
    }

    #[test]
    fn satisfiable_witnesses_pass_the_independent_checker() {
        let sq = Configuration::square();
        for n in [4, 5, 6, 7] {
            let i = inst(n, n, 2, sq.clone(), SolveOptions::default());
            let out = solve_avoidance(&i);
            let g = out.coloring().expect("small squares are avoidable");
            assert!(verify_avoidance(g, &sq), "{n}x{n}");
        }
    }

    #[test]
    fn budget_exhaustion_is_reported_not_fatal() {
        let sq = Configuration::square();
        let opts = SolveOptions { node_budget: Some(3), ..SolveOptions::default() };
        let i = inst(8, 8, 2, sq, opts);
        assert!(matches!(solve_avoidance(&i), SolveOutcome::BudgetExceeded { .. }));
    }

    #[test]
    fn symmetry_flags_never_change_the_verdict() {
        let dom = Configuration::domino();
        let sq = Configuration::square();
        for (w, h, target) in [(2, 2, &dom), (3, 1, &dom), (3, 3, &sq), (2, 3, &sq)] {
            let mut verdicts = Vec::new();
            for fix in [false, true] {
                for canon in [false, true] {
                    for prop in [false, true] {
                        let opts = SolveOptions {
                            fix_first_cell: fix,
                            color_canonical: canon,
                            propagation: prop,
                            ..SolveOptions::default()
                        };
                        verdicts.push(
                            solve_avoidance(&inst(w, h, 3, target.clone(), opts)).is_satisfiable(),
                        );
                    }
                }
            }
            assert!(verdicts.windows(2).all(|v| v[0] == v[1]), "{w}x{h}");
        }
    }

    #[test]
    fn deterministic_mode_reproduces_witnesses() {
        let sq = Configuration::square();
        let runs: Vec<String> = (0..3)
            .map(|_| {
                let i = inst(6, 6, 2, sq.clone(), SolveOptions::default());
                solve_avoidance(&i).coloring().unwrap().to_string()
            })
            .collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[1], runs[2]);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_change_deterministic_witnesses() {
        let sq = Configuration::square();
        let single = solve_avoidance(&inst(6, 6, 2, sq.clone(), SolveOptions::default()));
        let four = solve_avoidance(&inst(
            6,
            6,
            2,
            sq.clone(),
            SolveOptions { threads: 4, ..SolveOptions::default() },
        ));
        assert_eq!(
            single.coloring().unwrap().to_string(),
            four.coloring().unwrap().to_string()
        );
    }

    #[test]
    fn seeded_value_order_still_verifies() {
        let sq = Configuration::square();
        let opts = SolveOptions { seed: Some(42), ..SolveOptions::default() };
        let out = solve_avoidance(&inst(7, 7, 2, sq.clone(), opts));
        assert!(verify_avoidance(out.coloring().unwrap(), &sq));
    }

    #[test]
    fn restarts_find_witnesses_and_report_cumulative_stats() {
        let sq = Configuration::square();
        let opts = SolveOptions { restart_base: Some(64), seed: Some(7), ..SolveOptions::default() };
        let out = solve_avoidance(&inst(6, 6, 2, sq.clone(), opts));
        assert!(out.is_satisfiable());
        assert!(out.stats().nodes > 0);
    }
}
