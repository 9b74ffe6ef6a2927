//! Multi-start Nelder-Mead downhill simplex.
//!
//! The simplex keeps `d + 1` vertices of dimension `d` in one flat buffer of
//! the vector precision, which makes its storage quadratic in `d`. Together
//! with the vertex values, the ordering permutation, a running vertex sum,
//! the centroid and two trial points this is `d^2 + 6d + O(1)` slots.
//! Trial points are clamped into the bounds before they are evaluated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metrics::Stopwatch;
use crate::objective::{BoxBounds, DecisionVector, Objective};
use crate::{BestPoint, Error, OptimizationResult, Precision, Real, Result, Termination};

#[derive(Debug, Clone, PartialEq)]
pub struct NmConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Iteration cap per descent.
    pub max_iterations: u64,
    /// A descent stops once the max-norm diameter drops below this.
    pub diameter_tol: f64,
    /// Descents run in addition to the first one.
    pub restarts: u32,
    pub seed: u64,
    /// Refuse to allocate a simplex workspace larger than this.
    pub memory_ceiling_bytes: u64,
    /// Evaluation budget shared by all descents.
    pub max_evaluations: Option<u64>,
}

impl Default for NmConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iterations: 100_000,
            diameter_tol: 1e-8,
            restarts: 4,
            seed: 0,
            memory_ceiling_bytes: 2_000_000_000,
            max_evaluations: None,
        }
    }
}

impl NmConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.reflection > 0.0
            && self.expansion > 1.0
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0;
        if !ok {
            return Err(Error::InvalidConfig(format!(
                "coefficients need reflection > 0, expansion > 1, 0 < contraction < 1, \
                 0 < shrink < 1; got ({}, {}, {}, {})",
                self.reflection, self.expansion, self.contraction, self.shrink
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if self.diameter_tol.is_nan() || self.diameter_tol <= 0.0 {
            return Err(Error::InvalidConfig("diameter_tol must be positive".into()));
        }
        if self.max_evaluations == Some(0) {
            return Err(Error::InvalidConfig("max_evaluations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepOutcome {
    Reflected,
    Expanded,
    ContractedOutside,
    ContractedInside,
    Shrunk,
}

/// Vertex store plus the work buffers one step needs.
#[derive(Debug, Clone)]
pub struct Simplex<T> {
    dim: usize,
    vertices: Vec<T>,
    values: Vec<f64>,
    order: Vec<usize>,
    sum: Vec<f64>,
    centroid: Vec<f64>,
    reflected: Vec<T>,
    trial: Vec<T>,
    replacements: usize,
    evaluations: u64,
}

impl<T: Real> Simplex<T> {
    /// Bytes [`Simplex::with_ceiling`] allocates for dimension `dim`, or `None` on
    /// overflow.
    pub fn workspace_bytes(dim: usize, precision: Precision) -> Option<u64> {
        let d = dim as u64;
        let b = precision.bytes();
        let coords = d.checked_add(1)?.checked_mul(d)?.checked_add(2 * d)?;
        let aux = (d + 1) * 8 + (d + 1) * std::mem::size_of::<usize>() as u64 + 2 * d * 8;
        coords.checked_mul(b)?.checked_add(aux)
    }

    /// Zeroed workspace. Fails with [`Error::MemoryLimit`] above `ceiling_bytes`.
    pub fn with_ceiling(dim: usize, ceiling_bytes: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        let required = Self::workspace_bytes(dim, T::PRECISION).unwrap_or(u64::MAX);
        if required > ceiling_bytes {
            return Err(Error::MemoryLimit {
                dim,
                required_bytes: required,
                ceiling_bytes,
            });
        }
        let zero = T::from_f64(0.0);
        Ok(Self {
            dim,
            vertices: vec![zero; (dim + 1) * dim],
            values: vec![f64::INFINITY; dim + 1],
            order: (0..=dim).collect(),
            sum: vec![0.0; dim],
            centroid: vec![0.0; dim],
            reflected: vec![zero; dim],
            trial: vec![zero; dim],
            replacements: 0,
            evaluations: 0,
        })
    }

    /// Simplex from explicit vertices, each evaluated once.
    pub fn from_vertices<O: Objective<T> + ?Sized>(
        vertices: &[Vec<T>],
        objective: &mut O,
    ) -> Result<Self> {
        let dim = vertices.len().saturating_sub(1);
        if dim == 0 || vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "a simplex in d dimensions needs d + 1 vertices of length d; got {} vertices",
                vertices.len()
            )));
        }
        let mut s = Self::with_ceiling(dim, u64::MAX)?;
        for (i, v) in vertices.iter().enumerate() {
            DecisionVector::new(v.clone())?;
            s.vertex_mut(i).copy_from_slice(v);
        }
        s.evaluate_all(objective)?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex(&self, i: usize) -> &[T] {
        &self.vertices[i * self.dim..(i + 1) * self.dim]
    }

    fn vertex_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.vertices[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Vertex indices from best to worst.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn best_index(&self) -> usize {
        self.order[0]
    }

    pub fn best_value(&self) -> f64 {
        self.values[self.order[0]]
    }

    pub fn worst_value(&self) -> f64 {
        self.values[self.order[self.dim]]
    }

    /// Objective evaluations performed through this simplex.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Number of coordinate slots in the vertex store, `(d + 1) * d`.
    pub fn coordinate_slots(&self) -> usize {
        self.vertices.len()
    }

    /// Sorts the permutation by value; ties go to the lower vertex index.
    pub fn sort(&mut self) {
        let values = &self.values;
        self.order
            .sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    }

    fn recompute_sum(&mut self) {
        self.sum.iter_mut().for_each(|s| *s = 0.0);
        for v in self.vertices.chunks_exact(self.dim) {
            for (s, x) in self.sum.iter_mut().zip(v) {
                *s += x.to_f64();
            }
        }
        self.replacements = 0;
    }

    fn evaluate_all<O: Objective<T> + ?Sized>(&mut self, objective: &mut O) -> Result<()> {
        for i in 0..=self.dim {
            let (start, end) = (i * self.dim, (i + 1) * self.dim);
            self.values[i] = objective.evaluate(&self.vertices[start..end])?;
            self.evaluations += 1;
        }
        self.recompute_sum();
        self.sort();
        Ok(())
    }

    /// Draws every vertex uniformly inside `bounds` and evaluates it.
    pub fn randomize<O: Objective<T> + ?Sized>(
        &mut self,
        rng: &mut impl Rng,
        bounds: &BoxBounds<T>,
        objective: &mut O,
    ) -> Result<()> {
        let dim = self.dim;
        for (n, slot) in self.vertices.iter_mut().enumerate() {
            let i = n % dim;
            let (lo, hi) = bounds.get(i);
            let u: f64 = rng.random();
            *slot = bounds.clamp(i, T::from_f64(lo.to_f64() + u * (hi.to_f64() - lo.to_f64())));
        }
        self.evaluate_all(objective)
    }

    fn replace_worst_with(&mut self, from_reflected: bool, value: f64) {
        let w = self.order[self.dim];
        let dim = self.dim;
        let src = if from_reflected {
            &self.reflected
        } else {
            &self.trial
        };
        let dst = &mut self.vertices[w * dim..(w + 1) * dim];
        for ((s, d), n) in self.sum.iter_mut().zip(dst.iter_mut()).zip(src) {
            *s += n.to_f64() - d.to_f64();
            *d = *n;
        }
        self.values[w] = value;
        self.replacements += 1;
        if self.replacements > dim {
            self.recompute_sum();
        }
    }

    fn max_norm_diameter(&self) -> f64 {
        let mut diameter = 0.0f64;
        for j in 0..self.dim {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in self.vertices.chunks_exact(self.dim) {
                let x = v[j].to_f64();
                lo = lo.min(x);
                hi = hi.max(x);
            }
            diameter = diameter.max(hi - lo);
        }
        diameter
    }

    pub fn best_vertex(&self) -> &[T] {
        self.vertex(self.best_index())
    }
}

/// Largest max-norm distance between any two vertices.
///
/// Equals the widest per-coordinate spread, so it costs O(d^2) rather than
/// O(d^3).
pub fn simplex_diameter<T: Real>(simplex: &Simplex<T>) -> f64 {
    simplex.max_norm_diameter()
}

#[inline]
fn affine_into<T: Real>(
    out: &mut [T],
    base: &[f64],
    towards: impl Fn(usize) -> f64,
    coef: f64,
    bounds: &BoxBounds<T>,
) {
    for (j, o) in out.iter_mut().enumerate() {
        let c = base[j];
        *o = bounds.clamp(j, T::from_f64(c + coef * (towards(j) - c)));
    }
}

/// One Nelder-Mead iteration on an ordered simplex. Leaves it ordered.
pub fn nm_step<T: Real, O: Objective<T> + ?Sized>(
    simplex: &mut Simplex<T>,
    objective: &mut O,
    bounds: &BoxBounds<T>,
    config: &NmConfig,
) -> Result<StepOutcome> {
    let d = simplex.dim;
    let best = simplex.order[0];
    let worst = simplex.order[d];
    let f_best = simplex.values[best];
    let f_second = simplex.values[simplex.order[d.saturating_sub(1)]];
    let f_worst = simplex.values[worst];

    {
        let wv = &simplex.vertices[worst * d..(worst + 1) * d];
        for ((c, s), w) in simplex.centroid.iter_mut().zip(&simplex.sum).zip(wv) {
            *c = (s - w.to_f64()) / d as f64;
        }
    }

    // Reflection: c + alpha (c - x_w) == c + (-alpha) (x_w - c).
    {
        let wv = &simplex.vertices[worst * d..(worst + 1) * d];
        affine_into(
            &mut simplex.reflected,
            &simplex.centroid,
            |j| wv[j].to_f64(),
            -config.reflection,
            bounds,
        );
    }
    let f_refl = objective.evaluate(&simplex.reflected)?;
    simplex.evaluations += 1;

    let outcome = if f_refl < f_best {
        {
            let r = &simplex.reflected;
            affine_into(
                &mut simplex.trial,
                &simplex.centroid,
                |j| r[j].to_f64(),
                config.expansion,
                bounds,
            );
        }
        let f_exp = objective.evaluate(&simplex.trial)?;
        simplex.evaluations += 1;
        if f_exp < f_refl {
            simplex.replace_worst_with(false, f_exp);
            StepOutcome::Expanded
        } else {
            simplex.replace_worst_with(true, f_refl);
            StepOutcome::Reflected
        }
    } else if f_refl < f_second {
        simplex.replace_worst_with(true, f_refl);
        StepOutcome::Reflected
    } else {
        let outside = f_refl < f_worst;
        {
            let wv = &simplex.vertices[worst * d..(worst + 1) * d];
            let r = &simplex.reflected;
            affine_into(
                &mut simplex.trial,
                &simplex.centroid,
                |j| if outside { r[j].to_f64() } else { wv[j].to_f64() },
                config.contraction,
                bounds,
            );
        }
        let f_con = objective.evaluate(&simplex.trial)?;
        simplex.evaluations += 1;
        if outside && f_con <= f_refl {
            simplex.replace_worst_with(false, f_con);
            StepOutcome::ContractedOutside
        } else if !outside && f_con < f_worst {
            simplex.replace_worst_with(false, f_con);
            StepOutcome::ContractedInside
        } else {
            shrink_towards_best(simplex, objective, config.shrink)?;
            StepOutcome::Shrunk
        }
    };
    simplex.sort();
    Ok(outcome)
}

fn shrink_towards_best<T: Real, O: Objective<T> + ?Sized>(
    simplex: &mut Simplex<T>,
    objective: &mut O,
    sigma: f64,
) -> Result<()> {
    let d = simplex.dim;
    let best = simplex.order[0];
    for i in (0..=d).filter(|&i| i != best) {
        for j in 0..d {
            let b = simplex.vertices[best * d + j].to_f64();
            let v = simplex.vertices[i * d + j].to_f64();
            simplex.vertices[i * d + j] = T::from_f64(b + sigma * (v - b));
        }
        simplex.values[i] = objective.evaluate(&simplex.vertices[i * d..(i + 1) * d])?;
        simplex.evaluations += 1;
    }
    simplex.recompute_sum();
    Ok(())
}

/// Summary of one descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descent {
    pub termination: Termination,
    pub iterations: u64,
    pub best_f: f64,
}

/// Iterates [`nm_step`] on an already evaluated simplex until the diameter,
/// iteration or evaluation limit stops it.
///
/// The diameter is checked every `d` iterations, which keeps its O(d^2) cost
/// amortized to O(d) per step.
pub fn nm_descend<T: Real, O: Objective<T> + ?Sized>(
    simplex: &mut Simplex<T>,
    objective: &mut O,
    bounds: &BoxBounds<T>,
    config: &NmConfig,
    evaluation_limit: Option<u64>,
) -> Result<Descent> {
    let check_every = simplex.dim.max(1) as u64;
    let mut iterations = 0u64;
    let termination = loop {
        if evaluation_limit.is_some_and(|lim| simplex.evaluations >= lim) {
            break Termination::BudgetExhausted;
        }
        if iterations.is_multiple_of(check_every) && simplex.max_norm_diameter() < config.diameter_tol {
            break Termination::ToleranceMet;
        }
        if iterations >= config.max_iterations {
            break Termination::SweepLimit;
        }
        nm_step(simplex, objective, bounds, config)?;
        iterations += 1;
    };
    Ok(Descent {
        termination,
        iterations,
        best_f: simplex.best_value(),
    })
}

/// Best of `restarts + 1` descents from seeded random simplices.
///
/// One workspace is allocated up front and reused by every descent.
pub fn nm_optimize<T: Real, O: Objective<T> + ?Sized>(
    objective: &mut O,
    bounds: &BoxBounds<T>,
    config: &NmConfig,
) -> Result<OptimizationResult<T>> {
    config.validate()?;
    let clock = Stopwatch::start();
    let dim = objective.dim();
    bounds.check_dim(dim)?;
    let mut simplex = Simplex::<T>::with_ceiling(dim, config.memory_ceiling_bytes)?;
    let mut best_x = vec![T::from_f64(0.0); dim];
    let mut best_f = f64::INFINITY;
    let mut best_termination = Termination::SweepLimit;
    let mut iterations = 0u64;
    let mut budget_hit = false;

    for restart in 0..=u64::from(config.restarts) {
        if let Some(lim) = config.max_evaluations {
            if simplex.evaluations >= lim {
                budget_hit = true;
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart);
        simplex.randomize(&mut rng, bounds, objective)?;
        let run = nm_descend(&mut simplex, objective, bounds, config, config.max_evaluations)?;
        iterations += run.iterations;
        if run.best_f < best_f {
            best_f = run.best_f;
            best_termination = run.termination;
            best_x.copy_from_slice(simplex.best_vertex());
        }
        if run.termination == Termination::BudgetExhausted {
            budget_hit = true;
            break;
        }
    }

    Ok(OptimizationResult {
        best_f,
        best_x: BestPoint::Full(DecisionVector::new(best_x)?),
        fe_used: simplex.evaluations,
        wall_seconds: clock.elapsed_seconds(),
        termination: if budget_hit {
            Termination::BudgetExhausted
        } else {
            best_termination
        },
        iterations,
    })
}
