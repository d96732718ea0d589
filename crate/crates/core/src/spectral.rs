//! Largest adjacency eigenvalues of the bipartite graphs.
//!
//! The adjacency spectrum of a bipartite graph is `±σ_i`, the singular values
//! of its point-by-line biadjacency operator `B`. Everything here works with
//! the positive semidefinite `B Bᵀ` on the point space and reports square
//! roots of its eigenvalues.
//!
//! A `q`-regular component contributes one eigenvalue `q²` to `B Bᵀ`, with the
//! component's point indicator as eigenvector. The iterative method projects
//! those indicators out, so the Lanczos run sees only the rest of the
//! spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::component_labels;
use crate::budget::Budget;
use crate::graph::ImplicitGraph;
use crate::{Error, Result};

/// Dense decomposition needs `2 q^n` at most this.
pub const DENSE_LIMIT: u64 = 8192;

/// `Auto` picks the dense route up to this many points.
pub const AUTO_DENSE_POINTS: u64 = 1024;

/// Eigenvalues within this of `q` count as component Perron values.
const PERRON_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    Iterative,
    Auto,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dense" => Ok(Method::Dense),
            "iterative" => Ok(Method::Iterative),
            "auto" => Ok(Method::Auto),
            other => Err(format!("unknown method {other:?} (dense, iterative, auto)")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    pub method: Method,
    /// Report the largest value below `q` instead of the raw second value
    /// when the graph is disconnected.
    pub per_component: bool,
    pub seed: u64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            method: Method::Auto,
            per_component: false,
            seed: 0x5EED,
            tolerance: 1e-10,
            max_iterations: 500,
        }
    }
}

impl SpectralOptions {
    pub fn with_method(method: Method) -> Self {
        SpectralOptions {
            method,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `2 √q`.
    pub bound: f64,
    /// `bound - lambda2`.
    pub margin: f64,
    pub method: Method,
    /// Largest final Ritz residual, iterative method only.
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    /// Set when the graph is disconnected.
    pub component_note: bool,
    pub components: u64,
    pub per_component: bool,
}

/// The point-by-line 0/1 operator of a graph, applied through the oracle.
pub struct Biadjacency<'a> {
    graph: &'a ImplicitGraph,
}

impl<'a> Biadjacency<'a> {
    pub fn new(graph: &'a ImplicitGraph) -> Self {
        Biadjacency { graph }
    }

    pub fn dim(&self) -> usize {
        self.graph.side_size() as usize
    }

    /// `out[v] = Σ_{w ~ v} x[w]` with `v` ranging over one side and `w` over
    /// the other; `from_lines` selects which side `x` lives on.
    fn sweep(&self, x: &[f64], out: &mut [f64], from_lines: bool) {
        let g = self.graph;
        let n = g.dimension();
        let offset = g.side_size();
        let (row_base, col_base) = if from_lines { (0, offset) } else { (offset, 0) };
        out.par_chunks_mut(1024)
            .enumerate()
            .for_each_init(
                || vec![0u32; 2 * n],
                |scratch, (c, chunk)| {
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        let row = row_base + (c * 1024 + i) as u64;
                        let mut acc = 0.0;
                        g.for_each_neighbor(row, scratch, |_, w| acc += x[(w - col_base) as usize]);
                        *slot = acc;
                    }
                },
            );
    }

    /// `B x`: point values from line values.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.sweep(x, out, true);
    }

    /// `Bᵀ y`: line values from point values.
    pub fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        self.sweep(y, out, false);
    }

    /// `B Bᵀ x`.
    pub fn apply_gram(&self, x: &[f64], tmp: &mut [f64], out: &mut [f64]) {
        self.apply_transpose(x, tmp);
        self.apply(tmp, out);
    }

    /// Materialized `B Bᵀ`: entry `(a, b)` counts lines through both points.
    pub fn dense_gram(&self) -> DMatrix<f64> {
        let g = self.graph;
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        let mut scratch = vec![0; 2 * g.dimension()];
        let mut pts = Vec::with_capacity(g.q() as usize);
        for line in g.side_size()..g.order() {
            pts.clear();
            g.for_each_neighbor(line, &mut scratch, |_, p| pts.push(p as usize));
            for &a in &pts {
                for &b in &pts {
                    m[(a, b)] += 1.0;
                }
            }
        }
        m
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn orthogonalize(w: &mut [f64], against: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for v in against {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

struct LanczosOutcome {
    value: f64,
    residual: f64,
    iterations: usize,
}

/// Largest eigenvalue of `B Bᵀ` on the orthogonal complement of `deflate`
/// (orthonormal vectors).
fn lanczos_top(
    op: &Biadjacency,
    deflate: &[Vec<f64>],
    opts: &SpectralOptions,
    rng: &mut ChaCha8Rng,
) -> Result<LanczosOutcome> {
    let dim = op.dim();
    let room = dim.saturating_sub(deflate.len());
    if room == 0 {
        return Ok(LanczosOutcome {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    orthogonalize(&mut v, deflate);
    normalize(&mut v);

    let scale = (op.graph.q() * op.graph.q()) as f64;
    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut tmp = vec![0.0; dim];
    let mut last = (0.0, f64::INFINITY);
    let limit = opts.max_iterations.min(room);
    for j in 0..limit {
        let mut w = vec![0.0; dim];
        op.apply_gram(&basis[j], &mut tmp, &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        orthogonalize(&mut w, deflate);
        orthogonalize(&mut w, &basis);
        let b = normalize(&mut w);

        let k = alpha.len();
        let breakdown = b <= 1e-12 * scale;
        if breakdown || k == limit || k <= 50 || k.is_multiple_of(10) {
            let mut t = DMatrix::zeros(k, k);
            for i in 0..k {
                t[(i, i)] = alpha[i];
                if i + 1 < k {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let top = eig.eigenvalues.imax();
            let value = eig.eigenvalues[top];
            let residual = b * eig.eigenvectors[(k - 1, top)].abs();
            last = (value, residual);
            if breakdown || residual < opts.tolerance {
                return Ok(LanczosOutcome {
                    value,
                    residual,
                    iterations: k,
                });
            }
        }
        beta.push(b);
        basis.push(w);
    }
    if limit == room {
        // the Krylov space filled the whole complement
        return Ok(LanczosOutcome {
            value: last.0,
            residual: last.1,
            iterations: limit,
        });
    }
    Err(Error::NotConverged {
        iterations: limit,
        residual: last.1,
    })
}

fn sigma(mu: f64) -> f64 {
    mu.max(0.0).sqrt()
}

fn finish(
    graph: &ImplicitGraph,
    lambda1: f64,
    lambda2: f64,
    method: Method,
    iterative: Option<(f64, usize)>,
    components: u64,
    per_component: bool,
) -> SpectralReport {
    let bound = 2.0 * (graph.q() as f64).sqrt();
    SpectralReport {
        lambda1,
        lambda2,
        bound,
        margin: bound - lambda2,
        method,
        residual: iterative.map(|r| r.0),
        iterations: iterative.map(|r| r.1),
        component_note: components > 1,
        components,
        per_component,
    }
}

fn dense(graph: &ImplicitGraph, opts: &SpectralOptions, budget: &Budget) -> Result<SpectralReport> {
    if graph.order() > DENSE_LIMIT {
        return Err(Error::SizeLimit {
            what: "dense eigendecomposition".into(),
            size: graph.order(),
            limit: DENSE_LIMIT,
        });
    }
    let dim = graph.side_size();
    budget.check("dense eigendecomposition", dim * dim, 8 * 3)?;
    let gram = Biadjacency::new(graph).dense_gram();
    let mut mus: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    let sigmas: Vec<f64> = mus.into_iter().map(sigma).collect();
    let q = graph.q() as f64;
    let perron = sigmas.iter().filter(|&&s| s >= q - PERRON_GAP).count() as u64;
    let lambda1 = sigmas[0];
    let lambda2 = if opts.per_component {
        sigmas.iter().copied().find(|&s| s < q - PERRON_GAP).unwrap_or(0.0)
    } else {
        sigmas.get(1).copied().unwrap_or(0.0)
    };
    Ok(finish(graph, lambda1, lambda2, Method::Dense, None, perron, opts.per_component))
}

fn iterative(graph: &ImplicitGraph, opts: &SpectralOptions, budget: &Budget) -> Result<SpectralReport> {
    let dim = graph.side_size();
    let vectors = opts.max_iterations as u64 + 8;
    budget.check("iterative eigensolver", dim, 8 * vectors)?;
    let labels = component_labels(graph, budget)?;
    let count = labels.sizes.len();

    // point indicators of each component, normalized
    let mut indicators = vec![vec![0.0; dim as usize]; count];
    for p in 0..dim as usize {
        indicators[labels.labels[p] as usize][p] = 1.0;
    }
    indicators.iter_mut().for_each(|v| {
        normalize(v);
    });

    let op = Biadjacency::new(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let top = lanczos_top(&op, &[], opts, &mut rng)?;
    let rest = lanczos_top(&op, &indicators, opts, &mut rng)?;
    let residual = top.residual.max(rest.residual);
    let iterations = top.iterations + rest.iterations;

    let lambda2 = if count > 1 && !opts.per_component {
        // Rayleigh quotient of a second component indicator: a second copy of the top value
        let mut tmp = vec![0.0; dim as usize];
        let mut out = vec![0.0; dim as usize];
        op.apply_gram(&indicators[1], &mut tmp, &mut out);
        sigma(dot(&indicators[1], &out))
    } else {
        sigma(rest.value)
    };
    Ok(finish(
        graph,
        sigma(top.value),
        lambda2,
        Method::Iterative,
        Some((residual, iterations)),
        count as u64,
        opts.per_component,
    ))
}

/// The two largest adjacency eigenvalues.
pub fn lambda2(graph: &ImplicitGraph, opts: &SpectralOptions, budget: &Budget) -> Result<SpectralReport> {
    let method = match opts.method {
        Method::Auto if graph.side_size() <= AUTO_DENSE_POINTS => Method::Dense,
        Method::Auto => Method::Iterative,
        m => m,
    };
    match method {
        Method::Dense => dense(graph, opts, budget),
        _ => iterative(graph, opts, budget),
    }
}

/// Whether `λ2 <= 2√q + 1e-8`.
pub fn check_2sqrtq(
    graph: &ImplicitGraph,
    opts: &SpectralOptions,
    budget: &Budget,
) -> Result<(bool, SpectralReport)> {
    let report = lambda2(graph, opts, budget)?;
    Ok((report.lambda2 <= report.bound + 1e-8, report))
}
