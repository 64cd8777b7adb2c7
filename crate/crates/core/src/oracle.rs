//! Exact and heuristic search for local antimagic labelings of small graphs.
//!
//! The exact search fixes which edge gets label 1 (one representative per
//! edge orbit under the automorphisms found), then assigns the remaining
//! labels edge by edge. Edges are ordered so that high-degree vertices are
//! completed first. A branch is cut when two completed adjacent vertices tie,
//! when the colour budget is exceeded, or when a vertex's reachable colour
//! range cannot meet the constraints.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chromatic::{chromatic_number_small, Chromatic, DEFAULT_VERTEX_LIMIT};
use crate::graph::{Edge, Graph};
use crate::labeling::{bipartition_lower_bound, EdgeLabeling};
use crate::vertex::VertexId;

pub const DEFAULT_EDGE_CAP: usize = 12;
/// The label set is a 64-bit mask.
pub const HARD_EDGE_LIMIT: usize = 63;
const AUTOMORPHISM_BUDGET: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {size} edges, above the exact-search cap {cap}")]
    TooManyEdges { size: usize, cap: usize },
    #[error("contradictory constraints: {0}")]
    Contradictory(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiLa {
    Value(u32),
    /// No bijection is local antimagic.
    NoLabeling,
}

#[derive(Clone, Debug, Default)]
pub struct Constraints {
    /// Every induced colour must lie in this set.
    pub colors: Option<BTreeSet<u64>>,
    /// At most this many distinct colours.
    pub max_colors: Option<u32>,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub edge_cap: usize,
    /// Start the χ_la scan at the bipartition/chromatic lower bound.
    pub use_lower_bound: bool,
    /// Branch only on one edge per automorphism orbit for label 1.
    pub use_symmetry: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            edge_cap: DEFAULT_EDGE_CAP,
            use_lower_bound: true,
            use_symmetry: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub branches: usize,
}

struct Problem {
    n: usize,
    q: usize,
    ids: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    degree: Vec<u32>,
}

impl Problem {
    fn new(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.vertices().cloned().collect();
        let idx = |v: &VertexId| ids.binary_search(v).unwrap();
        let edges: Vec<(usize, usize)> = g
            .edges()
            .map(|e| {
                let (a, b) = e.ends();
                (idx(a), idx(b))
            })
            .collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let degree = adj.iter().map(|n| n.len() as u32).collect();
        Problem {
            n: ids.len(),
            q: edges.len(),
            ids,
            edges,
            adj,
            degree,
        }
    }

    /// Edge indices with `first` in front, the rest grouped by endpoint in
    /// order of descending degree.
    fn order(&self, first: usize) -> Vec<usize> {
        let mut verts: Vec<usize> = (0..self.n).collect();
        verts.sort_by_key(|&v| (std::cmp::Reverse(self.degree[v]), v));
        let mut out = vec![first];
        let mut taken = vec![false; self.q];
        taken[first] = true;
        for v in verts {
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if (a == v || b == v) && !taken[e] {
                    taken[e] = true;
                    out.push(e);
                }
            }
        }
        out
    }

    fn to_labeling(&self, g: &Graph, labels: &[u64]) -> EdgeLabeling {
        let map: BTreeMap<Edge, u64> = self
            .edges
            .iter()
            .zip(labels)
            .map(|(&(a, b), &l)| {
                (
                    Edge::new(self.ids[a].clone(), self.ids[b].clone()).unwrap(),
                    l,
                )
            })
            .collect();
        EdgeLabeling::new(g.clone(), map).expect("search produces bijections")
    }

    /// Representatives of edge orbits under the automorphisms found within
    /// the budget. Any subset of automorphisms gives sound (coarser or
    /// equal) classes, since each class lies inside a true orbit.
    fn edge_orbit_reps(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.q).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        let edge_index: BTreeMap<(usize, usize), usize> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| ((a.min(b), a.max(b)), i))
            .collect();
        let mut perm = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        let mut budget = AUTOMORPHISM_BUDGET;
        let mut on_auto = |perm: &[usize]| {
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                let (x, y) = (perm[a], perm[b]);
                let j = edge_index[&(x.min(y), x.max(y))];
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        };
        self.automorphisms(0, &mut perm, &mut used, &mut budget, &mut on_auto);
        let mut reps: Vec<usize> = (0..self.q).filter(|&i| find(&mut parent, i) == i).collect();
        reps.sort_unstable();
        reps
    }

    fn automorphisms(
        &self,
        v: usize,
        perm: &mut [usize],
        used: &mut [bool],
        budget: &mut usize,
        on_auto: &mut dyn FnMut(&[usize]),
    ) {
        if *budget == 0 {
            return;
        }
        *budget -= 1;
        if v == self.n {
            on_auto(perm);
            return;
        }
        for w in 0..self.n {
            if used[w] || self.degree[w] != self.degree[v] {
                continue;
            }
            // Adjacency to already-mapped vertices must be preserved both ways.
            let ok = (0..v).all(|u| {
                let a = self.adj[v].contains(&u);
                let b = self.adj[w].contains(&perm[u]);
                a == b
            });
            if !ok {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            self.automorphisms(v + 1, perm, used, budget, on_auto);
            used[w] = false;
            perm[v] = usize::MAX;
            if *budget == 0 {
                return;
            }
        }
    }
}

struct Search<'a> {
    p: &'a Problem,
    order: Vec<usize>,
    constraints: &'a Constraints,
    limit: usize,
    labels: Vec<u64>,
    used: u64,
    sum: Vec<u64>,
    left: Vec<u32>,
    colours: Vec<(u64, u32)>,
    nodes: u64,
    abort: &'a dyn Fn() -> bool,
}

impl Search<'_> {
    fn extreme_sum(&self, r: u32, largest: bool) -> u64 {
        let q = self.p.q as u32;
        let mut free = !self.used & (((1u128 << (q + 1)) - 2) as u64);
        let mut total = 0;
        for _ in 0..r {
            if free == 0 {
                break;
            }
            let bit = if largest {
                63 - free.leading_zeros()
            } else {
                free.trailing_zeros()
            };
            total += u64::from(bit);
            free &= !(1u64 << bit);
        }
        total
    }

    fn colour_allowed(&self, c: u64) -> bool {
        if let Some(set) = &self.constraints.colors {
            if !set.contains(&c) {
                return false;
            }
        }
        self.colours.iter().any(|&(x, _)| x == c) || self.colours.len() < self.limit
    }

    /// Can vertex `v`, still open, end on an admissible colour?
    fn range_ok(&self, v: usize) -> bool {
        let r = self.left[v];
        let lo = self.sum[v] + self.extreme_sum(r, false);
        let hi = self.sum[v] + self.extreme_sum(r, true);
        if let Some(set) = &self.constraints.colors {
            if set.range(lo..=hi).next().is_none() {
                return false;
            }
        }
        if self.colours.len() >= self.limit {
            return self.colours.iter().any(|&(c, _)| lo <= c && c <= hi);
        }
        true
    }

    fn finish_ok(&self, v: usize) -> bool {
        let c = self.sum[v];
        self.colour_allowed(c)
            && self.p.adj[v]
                .iter()
                .all(|&w| self.left[w] != 0 || self.sum[w] != c)
    }

    fn add_colour(&mut self, c: u64) {
        match self.colours.iter_mut().find(|(x, _)| *x == c) {
            Some((_, n)) => *n += 1,
            None => self.colours.push((c, 1)),
        }
    }

    fn remove_colour(&mut self, c: u64) {
        let i = self.colours.iter().position(|&(x, _)| x == c).unwrap();
        self.colours[i].1 -= 1;
        if self.colours[i].1 == 0 {
            self.colours.swap_remove(i);
        }
    }

    /// Place `label` on the edge at position `pos`; false if that is cut.
    fn place(&mut self, pos: usize, label: u64) -> bool {
        let (a, b) = self.p.edges[self.order[pos]];
        self.labels[self.order[pos]] = label;
        self.used |= 1 << label;
        for v in [a, b] {
            self.sum[v] += label;
            self.left[v] -= 1;
        }
        let mut ok = true;
        for v in [a, b] {
            if self.left[v] == 0 {
                if ok && self.finish_ok(v) {
                    self.add_colour(self.sum[v]);
                } else {
                    ok = false;
                    // Mark so unplace knows this one was never counted.
                    self.left[v] = u32::MAX;
                }
            }
        }
        if ok {
            ok = [a, b]
                .iter()
                .all(|&v| self.left[v] == 0 || self.range_ok(v));
        }
        ok
    }

    fn unplace(&mut self, pos: usize, label: u64) {
        let (a, b) = self.p.edges[self.order[pos]];
        for v in [b, a] {
            if self.left[v] == 0 {
                self.remove_colour(self.sum[v]);
            } else if self.left[v] == u32::MAX {
                self.left[v] = 0;
            }
        }
        for v in [a, b] {
            self.sum[v] -= label;
            self.left[v] += 1;
        }
        self.used &= !(1 << label);
        self.labels[self.order[pos]] = 0;
    }

    fn dfs(&mut self, pos: usize) -> bool {
        if pos == self.p.q {
            return true;
        }
        if (self.abort)() {
            return false;
        }
        for label in 2..=self.p.q as u64 {
            if self.used & (1 << label) != 0 {
                continue;
            }
            self.nodes += 1;
            if self.place(pos, label) && self.dfs(pos + 1) {
                return true;
            }
            self.unplace(pos, label);
        }
        false
    }
}

/// Result of one exact feasibility search.
struct Found {
    labels: Option<Vec<u64>>,
    stats: SearchStats,
}

fn branches(p: &Problem, symmetry: bool) -> Vec<usize> {
    if symmetry {
        p.edge_orbit_reps()
    } else {
        (0..p.q).collect()
    }
}

/// Is there a local antimagic labeling with at most `limit` colours that
/// meets `constraints`? Branches run in parallel; the answer, the witness
/// and the node count do not depend on scheduling.
fn feasible(p: &Problem, limit: usize, constraints: &Constraints, symmetry: bool) -> Found {
    if p.q == 0 {
        return Found {
            labels: (p.n == 0 || limit >= 1).then(Vec::new),
            stats: SearchStats::default(),
        };
    }
    let reps = branches(p, symmetry);
    let first_hit = AtomicUsize::new(usize::MAX);
    let results: Vec<(Option<Vec<u64>>, u64)> = reps
        .par_iter()
        .enumerate()
        .map(|(bi, &rep)| {
            let abort = || first_hit.load(Ordering::Relaxed) < bi;
            let mut s = Search {
                p,
                order: p.order(rep),
                constraints,
                limit,
                labels: vec![0; p.q],
                used: 0,
                sum: vec![0; p.n],
                left: p.degree.clone(),
                colours: Vec::new(),
                nodes: 1,
                abort: &abort,
            };
            let found = s.place(0, 1) && s.dfs(1);
            if found {
                first_hit.fetch_min(bi, Ordering::Relaxed);
                (Some(s.labels), s.nodes)
            } else {
                (None, s.nodes)
            }
        })
        .collect();
    let hit = results.iter().position(|(l, _)| l.is_some());
    let counted = hit.map_or(results.len(), |h| h + 1);
    let nodes = results[..counted].iter().map(|(_, n)| n).sum();
    Found {
        labels: hit.map(|h| results[h].0.clone().unwrap()),
        stats: SearchStats {
            nodes_expanded: nodes,
            branches: reps.len(),
        },
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<(), OracleError> {
    let cap = cap.min(HARD_EDGE_LIMIT);
    if g.size() > cap {
        return Err(OracleError::TooManyEdges {
            size: g.size(),
            cap,
        });
    }
    Ok(())
}

/// Lower bound on χ_la: the bipartition lemma and the chromatic number.
pub fn chi_la_lower_bound(g: &Graph) -> u32 {
    let lemma = bipartition_lower_bound(g).value;
    let chi = match chromatic_number_small(g, 8, DEFAULT_VERTEX_LIMIT) {
        Ok(Chromatic::Exact(c)) => c,
        Ok(Chromatic::AboveCap(c)) => c + 1,
        Err(_) => 0,
    };
    lemma.max(chi)
}

#[derive(Clone, Debug)]
pub struct ChiLaResult {
    pub value: ChiLa,
    pub witness: Option<EdgeLabeling>,
    pub stats: SearchStats,
}

/// Exact χ_la, or [`ChiLa::NoLabeling`].
pub fn exact_chi_la(g: &Graph, opts: ExactOptions) -> Result<ChiLaResult, OracleError> {
    check_cap(g, opts.edge_cap)?;
    let p = Problem::new(g);
    let none = Constraints::default();
    let mut stats = SearchStats::default();
    let any = feasible(&p, p.n.max(1), &none, opts.use_symmetry);
    stats.nodes_expanded += any.stats.nodes_expanded;
    stats.branches = any.stats.branches;
    let Some(labels) = any.labels else {
        return Ok(ChiLaResult {
            value: ChiLa::NoLabeling,
            witness: None,
            stats,
        });
    };
    let mut best = p.to_labeling(g, &labels);
    let upper = best.induce().count() as u32;
    let lower = if opts.use_lower_bound {
        chi_la_lower_bound(g).max(1)
    } else {
        1
    };
    for c in lower..upper {
        let f = feasible(&p, c as usize, &none, opts.use_symmetry);
        stats.nodes_expanded += f.stats.nodes_expanded;
        if let Some(labels) = f.labels {
            best = p.to_labeling(g, &labels);
            return Ok(ChiLaResult {
                value: ChiLa::Value(c),
                witness: Some(best),
                stats,
            });
        }
    }
    Ok(ChiLaResult {
        value: ChiLa::Value(upper),
        witness: Some(best),
        stats,
    })
}

fn check_constraints(g: &Graph, c: &Constraints) -> Result<(), OracleError> {
    if c.max_colors == Some(0) && g.order() > 0 {
        return Err(OracleError::Contradictory(
            "zero colours for a non-empty graph".into(),
        ));
    }
    if let Some(set) = &c.colors {
        if set.is_empty() && g.order() > 0 {
            return Err(OracleError::Contradictory(
                "empty colour set for a non-empty graph".into(),
            ));
        }
        if set.contains(&0) && g.size() > 0 && set.len() == 1 {
            return Err(OracleError::Contradictory(
                "colour 0 only occurs on isolated vertices".into(),
            ));
        }
    }
    Ok(())
}

/// Exhaustive search for a labeling meeting `constraints`.
pub fn find_labeling_exact(
    g: &Graph,
    constraints: &Constraints,
    opts: ExactOptions,
) -> Result<(Option<EdgeLabeling>, SearchStats), OracleError> {
    check_cap(g, opts.edge_cap)?;
    check_constraints(g, constraints)?;
    let p = Problem::new(g);
    let limit = constraints.max_colors.map_or(p.n.max(1), |c| c as usize);
    // Colour-set targets break automorphism symmetry only if they name
    // vertices, which they do not, so orbit reduction stays sound.
    let f = feasible(&p, limit, constraints, opts.use_symmetry);
    Ok((f.labels.map(|l| p.to_labeling(g, &l)), f.stats))
}

/// True iff no local antimagic labeling of `g` uses at most two colours.
pub fn certify_no_2_coloring(g: &Graph, edge_cap: usize) -> Result<bool, OracleError> {
    let opts = ExactOptions {
        edge_cap,
        ..ExactOptions::default()
    };
    let c = Constraints {
        colors: None,
        max_colors: Some(2),
    };
    Ok(find_labeling_exact(g, &c, opts)?.0.is_none())
}

#[derive(Clone, Copy, Debug)]
pub struct HeuristicOptions {
    pub seed: u64,
    pub restarts: u32,
    pub steps_per_restart: u32,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions {
            seed: 0,
            restarts: 50,
            steps_per_restart: 20_000,
        }
    }
}

fn penalty(p: &Problem, labels: &[u64], c: &Constraints) -> u64 {
    let mut sum = vec![0u64; p.n];
    for (&(a, b), &l) in p.edges.iter().zip(labels) {
        sum[a] += l;
        sum[b] += l;
    }
    let ties = p.edges.iter().filter(|&&(a, b)| sum[a] == sum[b]).count() as u64;
    let mut score = ties * 1000;
    if let Some(set) = &c.colors {
        score += 10 * sum.iter().filter(|s| !set.contains(s)).count() as u64;
    }
    if let Some(k) = c.max_colors {
        let distinct = sum.iter().collect::<BTreeSet<_>>().len() as u64;
        score += 10 * distinct.saturating_sub(u64::from(k));
    }
    score
}

/// Randomised restarts with label-swap hill climbing. `None` means "not
/// found", never "does not exist".
pub fn find_labeling_heuristic(
    g: &Graph,
    constraints: &Constraints,
    opts: HeuristicOptions,
) -> Result<(Option<EdgeLabeling>, SearchStats), OracleError> {
    check_constraints(g, constraints)?;
    let p = Problem::new(g);
    let mut stats = SearchStats::default();
    if p.q < 2 {
        let labels: Vec<u64> = (1..=p.q as u64).collect();
        let ok = penalty(&p, &labels, constraints) == 0;
        return Ok((ok.then(|| p.to_labeling(g, &labels)), stats));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        stats.branches += 1;
        let mut labels: Vec<u64> = (1..=p.q as u64).collect();
        for i in (1..labels.len()).rev() {
            labels.swap(i, rng.gen_range(0..=i));
        }
        let mut score = penalty(&p, &labels, constraints);
        for _ in 0..opts.steps_per_restart {
            if score == 0 {
                break;
            }
            stats.nodes_expanded += 1;
            let i = rng.gen_range(0..p.q);
            let j = rng.gen_range(0..p.q);
            if i == j {
                continue;
            }
            labels.swap(i, j);
            let s = penalty(&p, &labels, constraints);
            // Accept sideways moves, and rarely worse ones, to leave plateaus.
            if s <= score || rng.gen_ratio(1, 200) {
                score = s;
            } else {
                labels.swap(i, j);
            }
        }
        if score == 0 {
            return Ok((Some(p.to_labeling(g, &labels)), stats));
        }
    }
    Ok((None, stats))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchResult {
    ChiLa {
        value: u32,
    },
    NoLabeling,
    Found {
        colors: BTreeSet<u64>,
        labels: Vec<(Edge, u64)>,
    },
    NotFound,
    NoneExists,
}

/// JSON search report.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub instance: String,
    pub mode: String,
    pub result: SearchResult,
    pub nodes_expanded: u64,
    pub wall_time: f64,
}

impl SearchReport {
    pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
        let start = Instant::now();
        let out = f();
        (out, start.elapsed().as_secs_f64())
    }

    pub fn found(l: &EdgeLabeling) -> SearchResult {
        SearchResult::Found {
            colors: l.induce().color_set(),
            labels: l
                .by_label()
                .into_iter()
                .map(|(n, e)| (e.clone(), n))
                .collect(),
        }
    }
}
