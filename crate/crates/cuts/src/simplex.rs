//! Dense two-phase primal simplex for `min c·x` over `x ≥ 0`.

use crate::CutError;

/// Pivot and feasibility tolerance.
pub const LP_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-10;
/// Degenerate pivots in a row before pricing switches to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    coefs: Vec<(usize, f64)>,
    sense: Sense,
    rhs: f64,
}

/// Minimisation problem over non-negative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.rows.len()
    }

    /// Adds `Σ coef·x sense rhs`; repeated variables are summed.
    pub fn add(&mut self, coefs: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        debug_assert!(coefs.iter().all(|&(j, _)| j < self.objective.len()));
        self.rows.push(Row { coefs, sense, rhs });
    }

    pub fn solve(&self) -> Result<LpSolution, CutError> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// Row-major `(m + 1) × (cols + 1)`; the last row holds reduced costs
    /// and the last column the right-hand side.
    cells: Vec<f64>,
    m: usize,
    cols: usize,
    basis: Vec<usize>,
    /// First artificial column.
    artificial: usize,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let vars = lp.objective.len();
        let m = lp.rows.len();
        let slacks = lp.rows.iter().filter(|r| r.sense != Sense::Eq).count();
        let artificials = lp
            .rows
            .iter()
            .filter(|r| {
                let flip = r.rhs < 0.0;
                matches!((r.sense, flip), (Sense::Ge, false) | (Sense::Le, true) | (Sense::Eq, _))
            })
            .count();
        let cols = vars + slacks + artificials;
        let width = cols + 1;
        let mut t = Self {
            cells: vec![0.0; (m + 1) * width],
            m,
            cols,
            basis: vec![0; m],
            artificial: vars + slacks,
            pivots: 0,
        };
        let (mut next_slack, mut next_art) = (vars, vars + slacks);
        for (i, row) in lp.rows.iter().enumerate() {
            let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
            let base = i * width;
            for &(j, a) in &row.coefs {
                t.cells[base + j] += sign * a;
            }
            t.cells[base + cols] = sign * row.rhs;
            let sense = match (row.sense, sign < 0.0) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            };
            if row.sense != Sense::Eq {
                t.cells[base + next_slack] = if sense == Sense::Le { 1.0 } else { -1.0 };
                if sense == Sense::Le {
                    t.basis[i] = next_slack;
                }
                next_slack += 1;
            }
            if sense != Sense::Le {
                t.cells[base + next_art] = 1.0;
                t.basis[i] = next_art;
                next_art += 1;
            }
        }
        t
    }

    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width() + j]
    }

    /// Loads `costs` into the objective row and prices out the basis.
    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width();
        let obj = self.m * w;
        self.cells[obj..obj + w].iter_mut().for_each(|c| *c = 0.0);
        for (j, &c) in costs.iter().enumerate() {
            self.cells[obj + j] = c;
        }
        for i in 0..self.m {
            let cb = costs.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    self.cells[obj + j] -= cb * self.cells[i * w + j];
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let p = self.cells[r * w + c];
        for j in 0..w {
            self.cells[r * w + j] /= p;
        }
        let pivot_row: Vec<f64> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + c];
            if f.abs() > 0.0 {
                let row = &mut self.cells[i * w..(i + 1) * w];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimises the loaded objective over columns `< allowed`.
    fn optimise(&mut self, allowed: usize) -> Result<(), CutError> {
        let limit = 50 * (self.m + self.cols).max(100);
        let mut streak = 0;
        loop {
            if self.pivots > limit {
                return Err(CutError::IterationLimit(self.pivots));
            }
            let bland = streak >= DEGENERATE_STREAK;
            let mut enter = None;
            let mut best = -LP_TOL;
            for j in 0..allowed {
                let rc = self.at(self.m, j);
                if rc < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = rc;
                }
            }
            let Some(c) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let ratio = self.at(i, self.cols) / a;
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - PIVOT_TOL || (ratio <= best + PIVOT_TOL && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(CutError::Unbounded);
            };
            streak = if ratio.abs() <= PIVOT_TOL { streak + 1 } else { 0 };
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution, CutError> {
        if self.artificial < self.cols {
            let costs: Vec<f64> = (0..self.cols).map(|j| if j >= self.artificial { 1.0 } else { 0.0 }).collect();
            self.set_costs(&costs);
            self.optimise(self.cols)?;
            let infeasibility = -self.at(self.m, self.cols);
            if infeasibility > LP_TOL * (1.0 + self.m as f64).sqrt() {
                return Err(CutError::Infeasible(infeasibility));
            }
            for i in 0..self.m {
                if self.basis[i] >= self.artificial {
                    if let Some(c) = (0..self.artificial).find(|&j| self.at(i, j).abs() > PIVOT_TOL) {
                        self.pivot(i, c);
                    }
                }
            }
        }
        self.set_costs(&lp.objective);
        self.optimise(self.artificial)?;
        let vars = lp.objective.len();
        let mut values = vec![0.0; vars];
        for i in 0..self.m {
            if self.basis[i] < vars {
                values[self.basis[i]] = self.at(i, self.cols).max(0.0);
            }
        }
        let objective = values.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();
        Ok(LpSolution {
            values,
            objective,
            pivots: self.pivots,
        })
    }
}
