//! Metropolis-within-Gibbs sampling of edge variables under the Yang–Mills
//! density, with batch-means error bars.
//!
//! A sweep proposes one random-walk move per free edge, picked uniformly at
//! random, followed by one move of each constraint conjugator. Each move
//! only re-evaluates the faces whose holonomy it changes.

mod estimate;

pub use estimate::{ChainSummary, Estimate, Method, Summary};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::heatkernel::{hk_density, hk_density_dt, HKParams, HeatKernelError};
use crate::surfgraph::Word;
use crate::unitary::{word_eval_full, GroupSpec, Unitary};
use crate::ymmeasure::{ConjugacyConstraint, EdgeConfig, MeasureError, MeasureSpec};

/// Words of RNG output reserved for one sweep.
const SWEEP_WORDS: u128 = 1 << 32;
/// Sweeps between proposal-scale adjustments during burn-in.
const TUNE_EVERY: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    HeatKernel(#[from] HeatKernelError),
    #[error("edge {0} is not a free edge")]
    NotFree(usize),
    #[error("observable returned a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    /// Sweeps per chain, burn-in included.
    pub steps: usize,
    pub burn_in: usize,
    /// Initial step size of the random-walk proposal.
    pub proposal_scale: f64,
    pub seed: u64,
    pub chains: usize,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            steps: 20_000,
            burn_in: 2_000,
            proposal_scale: 0.5,
            seed: 0,
            chains: 4,
        }
    }
}

impl ChainParams {
    pub fn validate(&self) -> Result<(), McError> {
        if self.steps == 0 || self.burn_in >= self.steps {
            return Err(McError::InvalidParams(format!(
                "need 0 ≤ burn_in < steps, got burn_in = {}, steps = {}",
                self.burn_in, self.steps
            )));
        }
        if !(self.proposal_scale > 0.0 && self.proposal_scale <= 2.0) {
            return Err(McError::InvalidParams(format!(
                "proposal_scale must lie in (0, 2], got {}",
                self.proposal_scale
            )));
        }
        if self.chains == 0 {
            return Err(McError::InvalidParams("chains must be positive".into()));
        }
        Ok(())
    }

    pub fn retained(&self) -> usize {
        self.steps - self.burn_in
    }
}

/// The rng of one sweep of one chain: a fixed window of the ChaCha stream
/// selected by the chain index.
pub fn sweep_rng(seed: u64, chain: u64, sweep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng.set_word_pos(sweep as u128 * SWEEP_WORDS);
    rng
}

/// A sampling problem over edge variables: faces with areas, edges that are
/// sampled, edges that stay fixed, and constrained boundary words.
#[derive(Debug, Clone)]
pub struct Model {
    group: GroupSpec,
    hk: HKParams,
    faces: Vec<(Word, f64)>,
    free: Vec<usize>,
    fixed: Vec<Option<Unitary>>,
    constraints: Vec<ConjugacyConstraint>,
    edge_faces: Vec<Vec<usize>>,
    edge_constraints: Vec<Vec<usize>>,
    constraint_faces: Vec<Vec<usize>>,
}

impl Model {
    pub fn from_measure(m: &MeasureSpec) -> Self {
        let ne = m.graph().edges().len();
        let faces = m.graph().faces().iter().map(|f| (f.word.clone(), f.area)).collect();
        Self::build(
            m.group(),
            *m.hk(),
            faces,
            m.free_edges(),
            vec![None; ne],
            m.constraints().to_vec(),
        )
    }

    /// The four-face measure around a crossing: edges `a₁..a₄` are indices
    /// 0–3 and the fixed `α₁..α₄` are 4–7, with faces `ρ_{t_i}(a_{i+1}⁻¹ α_i a_i)`.
    pub fn local(group: GroupSpec, hk: HKParams, alpha: &[Unitary; 4], t: [f64; 4]) -> Self {
        use crate::surfgraph::SignedEdge;
        let faces = (0..4)
            .map(|i| {
                let w = vec![
                    SignedEdge::forward(i),
                    SignedEdge::forward(4 + i),
                    SignedEdge::backward((i + 1) % 4),
                ];
                (w, t[i])
            })
            .collect();
        let mut fixed = vec![None; 8];
        for i in 0..4 {
            fixed[4 + i] = Some(alpha[i].clone());
        }
        Self::build(group, hk, faces, (0..4).collect(), fixed, Vec::new())
    }

    fn build(
        group: GroupSpec,
        hk: HKParams,
        faces: Vec<(Word, f64)>,
        free: Vec<usize>,
        fixed: Vec<Option<Unitary>>,
        constraints: Vec<ConjugacyConstraint>,
    ) -> Self {
        let ne = fixed.len();
        let direct: Vec<Vec<usize>> = (0..ne)
            .map(|e| {
                (0..faces.len())
                    .filter(|&f| faces[f].0.iter().any(|l| l.edge == e))
                    .collect()
            })
            .collect();
        let constraint_faces: Vec<Vec<usize>> = constraints
            .iter()
            .map(|c| direct[c.designated().edge].clone())
            .collect();
        let edge_constraints: Vec<Vec<usize>> = (0..ne)
            .map(|e| {
                (0..constraints.len())
                    .filter(|&j| {
                        let w = constraints[j].word();
                        w[..w.len() - 1].iter().any(|l| l.edge == e)
                    })
                    .collect()
            })
            .collect();
        let edge_faces = (0..ne)
            .map(|e| {
                let mut fs = direct[e].clone();
                for &j in &edge_constraints[e] {
                    fs.extend_from_slice(&constraint_faces[j]);
                }
                fs.sort_unstable();
                fs.dedup();
                fs
            })
            .collect();
        Self {
            group,
            hk,
            faces,
            free,
            fixed,
            constraints,
            edge_faces,
            edge_constraints,
            constraint_faces,
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn hk(&self) -> &HKParams {
        &self.hk
    }

    pub fn faces(&self) -> &[(Word, f64)] {
        &self.faces
    }

    pub fn free_edges(&self) -> &[usize] {
        &self.free
    }

    pub fn edge_count(&self) -> usize {
        self.fixed.len()
    }

    /// Same model with new face areas.
    pub fn with_areas(&self, areas: &[f64]) -> Self {
        let mut m = self.clone();
        for (f, &a) in m.faces.iter_mut().zip(areas) {
            f.1 = a;
        }
        m
    }

    fn log_density(&self, f: usize, h: &Unitary) -> Result<f64, McError> {
        match hk_density(self.faces[f].1, h, &self.hk) {
            Ok(r) => Ok(r.ln()),
            Err(HeatKernelError::Underflow { .. }) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e.into()),
        }
    }
}

/// Read-only view of the current state handed to observables.
pub struct ChainView<'a> {
    model: &'a Model,
    edges: &'a [Unitary],
    hol: &'a [Unitary],
    reps: &'a [Unitary],
}

impl<'a> ChainView<'a> {
    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn edges(&self) -> &[Unitary] {
        self.edges
    }

    pub fn face_holonomy(&self, f: usize) -> &Unitary {
        &self.hol[f]
    }

    pub fn holonomy(&self, w: &[crate::surfgraph::SignedEdge]) -> Unitary {
        word_eval_full(self.model.group, w, self.edges)
    }

    /// `∂_{t_F} log ρ_{t_F}(h_F)`.
    pub fn face_score(&self, f: usize) -> Result<f64, McError> {
        let (r, dr) = hk_density_dt(self.model.faces[f].1, &self.hol[f], &self.model.hk)?;
        Ok(dr / r)
    }

    pub fn config(&self) -> EdgeConfig {
        EdgeConfig::new(self.edges.iter().cloned().map(Some).collect(), self.reps.to_vec())
    }
}

/// One Markov chain.
pub struct Chain<'a> {
    model: &'a Model,
    edges: Vec<Unitary>,
    conj: Vec<Unitary>,
    reps: Vec<Unitary>,
    hol: Vec<Unitary>,
    log_rho: Vec<f64>,
    scale: f64,
    accepted: u64,
    proposed: u64,
}

impl<'a> Chain<'a> {
    /// Starts with every free edge and conjugator at the identity.
    pub fn new(model: &'a Model, scale: f64) -> Result<Self, McError> {
        let id = model.group.identity();
        let edges = model
            .fixed
            .iter()
            .map(|x| x.clone().unwrap_or_else(|| id.clone()))
            .collect();
        Self::from_parts(model, edges, vec![id; model.constraints.len()], None, scale)
    }

    /// Starts from given edge values and conjugators; designated edges are
    /// recomputed. `reps` overrides the class representatives implied by
    /// the conjugators.
    pub fn from_parts(
        model: &'a Model,
        mut edges: Vec<Unitary>,
        conj: Vec<Unitary>,
        reps: Option<Vec<Unitary>>,
        scale: f64,
    ) -> Result<Self, McError> {
        for (e, x) in model.fixed.iter().enumerate() {
            if let Some(x) = x {
                edges[e] = x.clone();
            }
        }
        let reps: Vec<Unitary> = reps.unwrap_or_else(|| {
            model
                .constraints
                .iter()
                .zip(&conj)
                .map(|(c, v)| c.representative(v))
                .collect()
        });
        let mut chain = Self {
            model,
            edges,
            conj,
            reps,
            hol: Vec::new(),
            log_rho: Vec::new(),
            scale,
            accepted: 0,
            proposed: 0,
        };
        for j in 0..model.constraints.len() {
            chain.solve_constraint(j);
        }
        for f in 0..model.faces.len() {
            let h = word_eval_full(model.group, &model.faces[f].0, &chain.edges);
            chain.log_rho.push(model.log_density(f, &h)?);
            chain.hol.push(h);
        }
        Ok(chain)
    }

    fn solve_constraint(&mut self, j: usize) {
        let c = &self.model.constraints[j];
        let w = c.word();
        let rest = word_eval_full(self.model.group, &w[..w.len() - 1], &self.edges);
        let g = self.reps[j].mul(&rest.inverse());
        self.edges[c.designated().edge] = if c.designated().inverse { g.inverse() } else { g };
    }

    pub fn edges(&self) -> &[Unitary] {
        &self.edges
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn view(&self) -> ChainView<'_> {
        ChainView {
            model: self.model,
            edges: &self.edges,
            hol: &self.hol,
            reps: &self.reps,
        }
    }

    /// Re-evaluates `faces`, accepts or rolls back. `undo` restores the
    /// moved variables on rejection.
    fn accept_or_undo<R: Rng + ?Sized>(
        &mut self,
        faces: &[usize],
        rng: &mut R,
        undo: impl FnOnce(&mut Self),
    ) -> Result<bool, McError> {
        let mut new_h = Vec::with_capacity(faces.len());
        let mut new_l = Vec::with_capacity(faces.len());
        for &f in faces {
            let h = word_eval_full(self.model.group, &self.model.faces[f].0, &self.edges);
            new_l.push(self.model.log_density(f, &h)?);
            new_h.push(h);
        }
        let old: f64 = faces.iter().map(|&f| self.log_rho[f]).sum();
        let new: f64 = new_l.iter().sum();
        let accept = if old == f64::NEG_INFINITY {
            true
        } else if new == f64::NEG_INFINITY {
            false
        } else {
            let delta = new - old;
            delta >= 0.0 || rng.gen::<f64>().ln() < delta
        };
        self.proposed += 1;
        if accept {
            self.accepted += 1;
            for ((&f, h), l) in faces.iter().zip(new_h).zip(new_l) {
                self.hol[f] = h;
                self.log_rho[f] = l;
            }
        } else {
            undo(self);
        }
        Ok(accept)
    }

    /// Random-walk move `x_e → x_e·exp(s·G)` of one free edge.
    pub fn metropolis_edge<R: Rng + ?Sized>(&mut self, e: usize, rng: &mut R) -> Result<bool, McError> {
        if !self.model.free.contains(&e) {
            return Err(McError::NotFree(e));
        }
        let g = self.model.group.gaussian_algebra(rng).scale_re(self.scale);
        let old = self.edges[e].clone();
        self.edges[e] = old.mul(&Unitary::exp_algebra(&g));
        let deps = self.model.edge_constraints[e].clone();
        let saved: Vec<Unitary> = deps
            .iter()
            .map(|&j| self.edges[self.model.constraints[j].designated().edge].clone())
            .collect();
        for &j in &deps {
            self.solve_constraint(j);
        }
        let faces = self.model.edge_faces[e].clone();
        self.accept_or_undo(&faces, rng, |c| {
            c.edges[e] = old;
            for (&j, x) in deps.iter().zip(saved) {
                c.edges[c.model.constraints[j].designated().edge] = x;
            }
        })
    }

    /// Random-walk move of the conjugator of constraint `j`, which moves the
    /// class representative within its class.
    pub fn metropolis_conjugator<R: Rng + ?Sized>(&mut self, j: usize, rng: &mut R) -> Result<bool, McError> {
        let g = self.model.group.gaussian_algebra(rng).scale_re(self.scale);
        let old_v = self.conj[j].clone();
        let old_rep = self.reps[j].clone();
        let d = self.model.constraints[j].designated().edge;
        let old_x = self.edges[d].clone();
        self.conj[j] = old_v.mul(&Unitary::exp_algebra(&g));
        self.reps[j] = self.model.constraints[j].representative(&self.conj[j]);
        self.solve_constraint(j);
        let faces = self.model.constraint_faces[j].clone();
        self.accept_or_undo(&faces, rng, |c| {
            c.conj[j] = old_v;
            c.reps[j] = old_rep;
            c.edges[d] = old_x;
        })
    }

    /// One sweep: `|free|` random-scan edge moves, then every conjugator
    /// once (skipped for U(1), where classes are points).
    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(), McError> {
        let nfree = self.model.free.len();
        for _ in 0..nfree {
            let e = self.model.free[rng.gen_range(0..nfree)];
            self.metropolis_edge(e, rng)?;
        }
        if self.model.group.n() > 1 {
            for j in 0..self.model.constraints.len() {
                self.metropolis_conjugator(j, rng)?;
            }
        }
        Ok(())
    }

    pub fn acceptance(&self) -> (u64, u64) {
        (self.accepted, self.proposed)
    }
}

/// Runs `p.chains` chains and records `k` observables after burn-in. During
/// burn-in the proposal scale is adapted towards 25–40% acceptance; it is
/// frozen afterwards.
pub fn run_chains<F>(model: &Model, p: &ChainParams, k: usize, observe: F) -> Result<Summary, McError>
where
    F: Fn(&ChainView<'_>, &mut [Complex64]) -> Result<(), McError> + Sync,
{
    p.validate()?;
    let batch = ((p.retained() as f64).sqrt().floor() as usize).max(1);
    let results: Vec<Result<ChainSummary, McError>> = (0..p.chains as u64)
        .into_par_iter()
        .map(|chain_id| {
            let mut chain = Chain::new(model, p.proposal_scale)?;
            let mut summary = ChainSummary::new(chain_id, k, batch);
            let mut x = vec![Complex64::new(0.0, 0.0); k];
            let mut acc = vec![Complex64::new(0.0, 0.0); k];
            let mut in_batch = 0;
            let mut window = (0u64, 0u64);
            for sweep in 0..p.steps {
                let mut rng = sweep_rng(p.seed, chain_id, sweep as u64);
                let before = chain.acceptance();
                chain.sweep(&mut rng)?;
                let after = chain.acceptance();
                if sweep < p.burn_in {
                    window.0 += after.0 - before.0;
                    window.1 += after.1 - before.1;
                    if (sweep + 1) % TUNE_EVERY == 0 && window.1 > 0 {
                        let rate = window.0 as f64 / window.1 as f64;
                        if rate > 0.40 {
                            chain.scale = (chain.scale * 1.25).min(2.0);
                        } else if rate < 0.25 {
                            chain.scale = (chain.scale / 1.25).max(1e-3);
                        }
                        window = (0, 0);
                    }
                    continue;
                }
                summary.accepted += after.0 - before.0;
                summary.proposed += after.1 - before.1;
                observe(&chain.view(), &mut x)?;
                if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(McError::NonFinite);
                }
                summary.record(&x, &mut acc, &mut in_batch);
            }
            Ok(summary)
        })
        .collect();
    let chains = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Summary::new(k, chains))
}

/// Chain average of `f` under the normalized measure.
pub fn estimate<F>(m: &MeasureSpec, f: F, p: &ChainParams) -> Result<Estimate, McError>
where
    F: Fn(&EdgeConfig) -> Complex64 + Sync,
{
    let model = Model::from_measure(m);
    let s = run_chains(&model, p, 1, |v, out| {
        out[0] = f(&v.config());
        Ok(())
    })?;
    Ok(s.estimate(0, Method::Mc))
}

/// `∂_{t_F} log ρ_{t_F}(h_F)` at a configuration.
pub fn face_score(m: &MeasureSpec, cfg: &EdgeConfig, face: usize) -> Result<f64, McError> {
    let f = m
        .graph()
        .faces()
        .get(face)
        .ok_or_else(|| McError::InvalidParams(format!("no face #{face}")))?;
    let h = cfg.holonomy(m.group(), &f.word).map_err(MeasureError::from)?;
    let (r, dr) = hk_density_dt(f.area, &h, m.hk())?;
    Ok(dr / r)
}

/// One Metropolis move of edge `e` starting from `cfg`.
pub fn metropolis_step<R: Rng + ?Sized>(
    m: &MeasureSpec,
    cfg: &EdgeConfig,
    e: usize,
    proposal_scale: f64,
    rng: &mut R,
) -> Result<(EdgeConfig, bool), McError> {
    let model = Model::from_measure(m);
    let edges = cfg.assigned();
    // Edge moves never touch the conjugators, so placeholders suffice.
    let conj = vec![m.group().identity(); m.constraints().len()];
    let mut chain = Chain::from_parts(&model, edges, conj, Some(cfg.reps().to_vec()), proposal_scale)?;
    let accepted = chain.metropolis_edge(e, rng)?;
    Ok((chain.view().config(), accepted))
}

#[cfg(test)]
mod tests;
