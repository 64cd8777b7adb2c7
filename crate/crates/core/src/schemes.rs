//! Explicit edge-label matrices for `2k` disjoint copies of `P_2 ∨ O_m`.
//!
//! Rows are keyed by edge role (`u_i x_{i,j}`, `u_i v_i`, `v_i x_{i,j}`),
//! columns by the copy index `i = 1..2k`. The even case (`m = 2n`) has
//! `4n+1` rows, the odd case (`m = 2n+1`) has `4n+3`.
//!
//! The printed tables only give the endpoints of each row segment; every
//! row is linear in `i` inside a segment, so the builders below use the
//! closed piecewise-linear forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::labeling::EdgeLabeling;
use crate::params::Parity;
use crate::vertex::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("(n, k) = (1, 1) has no matrix labeling; use the special 2P2 v O2 labeling")]
    UseSpecialCase,
    #[error("n and k must be >= 1")]
    ZeroParameter,
    #[error("matrix shape: expected {rows}x{cols}, got {got_rows}x{got_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("invariant {name} violated: {detail}")]
    InvariantViolation { name: String, detail: String },
}

/// Edge role of a matrix row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RowKey {
    /// `u_i x_{i,j}`
    UX(u32),
    /// `u_i v_i`
    UV,
    /// `v_i x_{i,j}`
    VX(u32),
}

impl RowKey {
    /// The edge this row labels in copy `i`.
    pub fn edge(self, i: u32) -> Edge {
        let (a, b) = match self {
            RowKey::UX(j) => (VertexId::u(i), VertexId::x(i, j)),
            RowKey::UV => (VertexId::u(i), VertexId::v(i)),
            RowKey::VX(j) => (VertexId::v(i), VertexId::x(i, j)),
        };
        Edge::new(a, b).unwrap()
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKey::UX(j) => write!(f, "u x{j}"),
            RowKey::UV => f.write_str("u v"),
            RowKey::VX(j) => write!(f, "v x{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMatrix {
    parity: Parity,
    n: u32,
    k: u32,
    /// Row-major, rows in [`LabelMatrix::row_keys`] order, `2k` columns.
    rows: Vec<Vec<u64>>,
}

impl LabelMatrix {
    /// Wrap explicit entries, checking only the shape.
    pub fn from_rows(
        parity: Parity,
        n: u32,
        k: u32,
        rows: Vec<Vec<u64>>,
    ) -> Result<Self, SchemeError> {
        if n == 0 || k == 0 {
            return Err(SchemeError::ZeroParameter);
        }
        let want_rows = 2 * parity.m(n) as usize + 1;
        let want_cols = 2 * k as usize;
        let got_cols = rows.first().map_or(0, Vec::len);
        if rows.len() != want_rows || rows.iter().any(|r| r.len() != want_cols) {
            return Err(SchemeError::Shape {
                rows: want_rows,
                cols: want_cols,
                got_rows: rows.len(),
                got_cols,
            });
        }
        Ok(LabelMatrix { parity, n, k, rows })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.parity.m(self.n)
    }

    /// Number of columns, `2k`.
    pub fn cols(&self) -> u32 {
        2 * self.k
    }

    /// Total number of labels, `2k(2m+1)`.
    pub fn q(&self) -> u64 {
        u64::from(self.cols()) * (2 * u64::from(self.m()) + 1)
    }

    /// u-rows by ascending `j`, then `uv`, then v-rows by ascending `j`.
    pub fn row_keys(&self) -> Vec<RowKey> {
        let m = self.m();
        (1..=m)
            .map(RowKey::UX)
            .chain([RowKey::UV])
            .chain((1..=m).map(RowKey::VX))
            .collect()
    }

    fn row_index(&self, key: RowKey) -> usize {
        let m = self.m() as usize;
        match key {
            RowKey::UX(j) => j as usize - 1,
            RowKey::UV => m,
            RowKey::VX(j) => m + j as usize,
        }
    }

    /// Entry for row `key`, column `i` (1-based).
    pub fn get(&self, key: RowKey, i: u32) -> u64 {
        self.rows[self.row_index(key)][i as usize - 1]
    }

    pub fn row(&self, key: RowKey) -> &[u64] {
        &self.rows[self.row_index(key)]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Swap two entries (test helper for building counterexamples).
    pub fn swap(&mut self, a: (RowKey, u32), b: (RowKey, u32)) {
        let va = self.get(a.0, a.1);
        let vb = self.get(b.0, b.1);
        let (ra, rb) = (self.row_index(a.0), self.row_index(b.0));
        self.rows[ra][a.1 as usize - 1] = vb;
        self.rows[rb][b.1 as usize - 1] = va;
    }

    /// Matrix as a plain numeric CSV, one line per row in table order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).unwrap()
    }

    /// Parse a CSV dump. Parity, `n` and `k` follow from the shape: `4n+1`
    /// rows is even, `4n+3` is odd, `2k` columns.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.deserialize::<Vec<u64>>() {
            rows.push(rec.map_err(|e| e.to_string())?);
        }
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r < 5 || c < 2 || c % 2 != 0 {
            return Err(format!("unsupported matrix shape {r}x{c}"));
        }
        let (parity, n) = match r % 4 {
            1 => (Parity::Even, (r - 1) / 4),
            3 => (Parity::Odd, (r - 3) / 4),
            _ => return Err(format!("row count {r} is not 4n+1 or 4n+3")),
        };
        LabelMatrix::from_rows(parity, n as u32, (c / 2) as u32, rows).map_err(|e| e.to_string())
    }

    /// Labels keyed by edge of `2k(P_2 ∨ O_m)`.
    pub fn edge_labels(&self) -> BTreeMap<Edge, u64> {
        let mut out = BTreeMap::new();
        for key in self.row_keys() {
            for i in 1..=self.cols() {
                out.insert(key.edge(i), self.get(key, i));
            }
        }
        out
    }
}

/// Even case, `(4n+1) x 2k`.
pub fn build_even_matrix(n: u32, k: u32) -> Result<LabelMatrix, SchemeError> {
    if n == 0 || k == 0 {
        return Err(SchemeError::ZeroParameter);
    }
    if (n, k) == (1, 1) {
        return Err(SchemeError::UseSpecialCase);
    }
    let (ni, ki) = (i64::from(n), i64::from(k));
    let base = 4 * ki * (ni - 1);
    let m = 2 * n;
    let mut rows = Vec::with_capacity(2 * m as usize + 1);
    let row = |f: &dyn Fn(i64) -> i64| -> Vec<u64> { (1..=2 * ki).map(|i| f(i) as u64).collect() };
    // Column segments of the last two row pairs: {1}, [2,k], [k+1,2k-1], {2k}.
    #[derive(Clone, Copy)]
    enum Seg {
        First,
        Low,
        High,
        Last,
    }
    let seg = |i: i64| {
        if i == 1 {
            Seg::First
        } else if i == 2 * ki {
            Seg::Last
        } else if i <= ki {
            Seg::Low
        } else {
            Seg::High
        }
    };

    for j in 1..=n {
        let jj = i64::from(j);
        if j < n {
            rows.push(row(&|i| 2 * ki * (4 * ni + 3 - 2 * jj) - 2 * ki + i));
            rows.push(row(&|i| 2 * ki * (2 * jj - 1) + 2 * ki + 1 - i));
        } else {
            rows.push(row(&|i| {
                base + match seg(i) {
                    Seg::First => 8 * ki + 1,
                    Seg::Low => 9 * ki + i - 1,
                    Seg::High => 7 * ki + i + 1,
                    Seg::Last => 10 * ki,
                }
            }));
            rows.push(row(&|i| {
                base + if i <= ki { 6 * ki + i - 1 } else { 6 * ki + i }
            }));
        }
    }
    rows.push(row(&|i| {
        base + match seg(i) {
            Seg::First => 7 * ki,
            Seg::Low => 6 * ki + 3 - 2 * i,
            Seg::High => 8 * ki - 2 * i,
            Seg::Last => 3 * ki + 1,
        }
    }));
    for j in 1..=n {
        let jj = i64::from(j);
        if j < n {
            rows.push(row(&|i| 4 * ki * (jj - 1) + i));
            rows.push(row(&|i| 2 * ki * (4 * ni + 2 - 2 * jj) + 1 - i));
        } else {
            rows.push(row(&|i| {
                base + match seg(i) {
                    Seg::First => 1,
                    Seg::Low => ki + i - 1,
                    Seg::High => i - ki + 1,
                    Seg::Last => 2 * ki,
                }
            }));
            rows.push(row(&|i| {
                base + match seg(i) {
                    Seg::First | Seg::Low => 2 * ki + i,
                    Seg::High => 2 * ki + i + 1,
                    Seg::Last => 4 * ki + 1,
                }
            }));
        }
    }
    LabelMatrix::from_rows(Parity::Even, n, k, rows)
}

/// Odd case, `(4n+3) x 2k`.
pub fn build_odd_matrix(n: u32, k: u32) -> Result<LabelMatrix, SchemeError> {
    if n == 0 || k == 0 {
        return Err(SchemeError::ZeroParameter);
    }
    let (ni, ki) = (i64::from(n), i64::from(k));
    let row = |f: &dyn Fn(i64) -> i64| -> Vec<u64> { (1..=2 * ki).map(|i| f(i) as u64).collect() };
    let mut rows = Vec::with_capacity(4 * n as usize + 3);
    for j in 1..=ni {
        rows.push(row(&|i| 4 * ki * (2 * ni - j) + 10 * ki + 1 - i));
        rows.push(row(&|i| 4 * ki * (2 * ni - j) + 6 * ki + i));
    }
    rows.push(row(&|i| 4 * ki * ni + 6 * ki + 1 - i));
    rows.push(row(&|i| i));
    rows.push(row(&|i| 4 * ki + 1 - i));
    for j in 1..=ni {
        rows.push(row(&|i| 4 * ki * j + i));
        rows.push(row(&|i| 4 * ki * j + 4 * ki + 1 - i));
    }
    LabelMatrix::from_rows(Parity::Odd, n, k, rows)
}

/// Even-or-odd dispatch.
pub fn build_matrix(parity: Parity, n: u32, k: u32) -> Result<LabelMatrix, SchemeError> {
    match parity {
        Parity::Even => build_even_matrix(n, k),
        Parity::Odd => build_odd_matrix(n, k),
    }
}

/// Closed forms shared by the observation checks and the transforms.
pub mod closed_form {
    use crate::params::Parity;

    /// f⁺(u_i), the column sum of the u-block.
    pub fn u_color(parity: Parity, n: u64, k: u64) -> u64 {
        match parity {
            Parity::Even => 8 * k * n * n + 8 * k * n + 5 * k + n,
            Parity::Odd => (n + 1) * (12 * n * k + 4 * k + 1) + 2 * k,
        }
    }

    /// f⁺(v_i), the column sum of the v-block.
    pub fn v_color(parity: Parity, n: u64, k: u64) -> u64 {
        match parity {
            Parity::Even => 8 * k * n * n + 4 * k * n + n + 1 - 3 * k,
            Parity::Odd => (n + 1) * (4 * n * k + 4 * k + 1),
        }
    }

    /// `f(u_i x_{i,j}) + f(v_{2k+1-i} x_{2k+1-i,j})`, constant in `i` and `j`.
    pub fn cross_pair(parity: Parity, n: u64, k: u64) -> u64 {
        match parity {
            Parity::Even => 8 * k * n + 2 * k + 1,
            Parity::Odd => 8 * k * n + 8 * k + 1,
        }
    }

    /// Colour of `x_j` after merging a whole column of `2k` copies.
    pub fn x_all(parity: Parity, n: u64, k: u64) -> u64 {
        k * 2 * cross_pair(parity, n, k)
    }

    /// Colour of a vertex made from `s` complementary column pairs.
    pub fn x_block(parity: Parity, n: u64, k: u64, s: u64) -> u64 {
        s * 2 * cross_pair(parity, n, k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationReport {
    pub parity: Parity,
    pub n: u32,
    pub k: u32,
    pub cross_pair_constant: u64,
    pub checks: Vec<Check>,
}

impl ObservationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct Checker {
    checks: Vec<Check>,
}

impl Checker {
    fn record(&mut self, name: &'static str, failures: Vec<String>) {
        let passed = failures.is_empty();
        let detail = if passed {
            "ok".to_string()
        } else {
            let shown: Vec<_> = failures.iter().take(3).cloned().collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        };
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

/// Evaluate every arithmetic identity of the matrix; never fails.
pub fn observe(mx: &LabelMatrix) -> ObservationReport {
    let (n, k) = (u64::from(mx.n), u64::from(mx.k));
    let parity = mx.parity;
    let m = mx.m();
    let cols = mx.cols();
    let mut ck = Checker { checks: Vec::new() };

    let seen: BTreeSet<u64> = mx.rows.iter().flatten().copied().collect();
    let count = mx.rows.iter().map(Vec::len).sum::<usize>() as u64;
    let mut bij = Vec::new();
    if count != seen.len() as u64 {
        bij.push(format!("{} repeated entries", count - seen.len() as u64));
    }
    if seen.first() != Some(&1) || seen.last() != Some(&mx.q()) || seen.len() as u64 != mx.q() {
        bij.push(format!("entries are not exactly 1..={}", mx.q()));
    }
    ck.record("bijection", bij);

    let u_block = |i: u32| -> u64 {
        (1..=m).map(|j| mx.get(RowKey::UX(j), i)).sum::<u64>() + mx.get(RowKey::UV, i)
    };
    let v_block = |i: u32| -> u64 {
        (1..=m).map(|j| mx.get(RowKey::VX(j), i)).sum::<u64>() + mx.get(RowKey::UV, i)
    };
    let want_u = closed_form::u_color(parity, n, k);
    let want_v = closed_form::v_color(parity, n, k);
    ck.record(
        "u-block-sum",
        (1..=cols)
            .filter(|&i| u_block(i) != want_u)
            .map(|i| format!("column {i}: {} != {want_u}", u_block(i)))
            .collect(),
    );
    ck.record(
        "v-block-sum",
        (1..=cols)
            .filter(|&i| v_block(i) != want_v)
            .map(|i| format!("column {i}: {} != {want_v}", v_block(i)))
            .collect(),
    );
    ck.record(
        "u-exceeds-v",
        (1..=cols)
            .filter(|&i| u_block(i) <= v_block(i))
            .map(|i| format!("column {i}"))
            .collect(),
    );

    let col_sum = |keys: &[RowKey], i: u32| -> u64 { keys.iter().map(|&r| mx.get(r, i)).sum() };
    let check_cols = |keys: &[RowKey], want: u64| -> Vec<String> {
        (1..=cols)
            .filter(|&i| col_sum(keys, i) != want)
            .map(|i| format!("column {i}: {} != {want}", col_sum(keys, i)))
            .collect()
    };
    // Complementary columns i and 2k+1-i.
    let pair = |key: RowKey, i: u32| mx.get(key, i) + mx.get(key, cols + 1 - i);

    match parity {
        Parity::Even => {
            let n2 = mx.n * 2;
            ck.record(
                "u-tail-column-sum",
                check_cols(
                    &[RowKey::UX(n2 - 1), RowKey::UX(n2), RowKey::UV],
                    12 * k * n + 9 * k + 1,
                ),
            );
            ck.record(
                "v-tail-column-sum",
                check_cols(
                    &[RowKey::UV, RowKey::VX(n2 - 1), RowKey::VX(n2)],
                    12 * k * n + 2 - 3 * k,
                ),
            );
            let mut t3 = Vec::new();
            let mut t4 = Vec::new();
            for j in 1..mx.n {
                t3.extend(check_cols(
                    &[RowKey::UX(2 * j - 1), RowKey::UX(2 * j)],
                    8 * k * n + 4 * k + 1,
                ));
                t4.extend(check_cols(
                    &[RowKey::VX(2 * j - 1), RowKey::VX(2 * j)],
                    8 * k * n + 1,
                ));
            }
            ck.record("u-row-pair-sums", t3);
            ck.record("v-row-pair-sums", t4);

            // Complementary-column pair sums per row.
            let mut cd = Vec::new();
            for j in 1..=mx.n {
                let jj = u64::from(j);
                let (u_odd, u_even, v_odd, v_even) = if j < mx.n {
                    (
                        4 * k * (4 * n + 3 - 2 * jj) - 2 * k + 1,
                        4 * k * (2 * jj - 1) + 2 * k + 1,
                        8 * k * (jj - 1) + 2 * k + 1,
                        4 * k * (4 * n + 2 - 2 * jj) - 2 * k + 1,
                    )
                } else {
                    (
                        8 * k * n + 10 * k + 1,
                        8 * k * n + 6 * k,
                        8 * k * n + 1 - 6 * k,
                        8 * k * n + 2 - 2 * k,
                    )
                };
                for (key, want) in [
                    (RowKey::UX(2 * j - 1), u_odd),
                    (RowKey::UX(2 * j), u_even),
                    (RowKey::VX(2 * j - 1), v_odd),
                    (RowKey::VX(2 * j), v_even),
                ] {
                    for i in 1..=mx.k {
                        if pair(key, i) != want {
                            cd.push(format!("{key}, i={i}: {} != {want}", pair(key, i)));
                        }
                    }
                }
            }
            ck.record("complementary-pair-sums", cd);
        }
        Parity::Odd => {
            ck.record(
                "uv-identity",
                (1..=cols)
                    .filter(|&i| mx.get(RowKey::UV, i) != u64::from(i))
                    .map(|i| format!("column {i}"))
                    .collect(),
            );
            let want = 2 * closed_form::cross_pair(parity, n, k);
            let mut four = Vec::new();
            for j in 1..=m {
                for i in 1..=mx.k {
                    let s = pair(RowKey::UX(j), i) + pair(RowKey::VX(j), i);
                    if s != want {
                        four.push(format!("j={j}, i={i}: {s} != {want}"));
                    }
                }
            }
            ck.record("four-term-sums", four);
        }
    }

    // Blocks b and 2r+1-b of s columns each.
    let mut blocks = Vec::new();
    for s in (1..=mx.k).filter(|s| mx.k % s == 0 && mx.k / s >= 2) {
        let r = mx.k / s;
        let want = closed_form::x_block(parity, n, k, u64::from(s));
        for b in 1..=r {
            for j in 1..=m {
                let got: u64 = ((b - 1) * s + 1..=b * s)
                    .map(|i| pair(RowKey::UX(j), i) + pair(RowKey::VX(j), i))
                    .sum();
                if got != want {
                    blocks.push(format!("s={s}, b={b}, j={j}: {got} != {want}"));
                }
            }
        }
    }
    ck.record("block-sums", blocks);

    // Cross pairs.
    let cross = closed_form::cross_pair(parity, n, k);
    let mut cp = Vec::new();
    for j in 1..=m {
        for i in 1..=mx.k {
            let a = mx.get(RowKey::UX(j), i) + mx.get(RowKey::VX(j), cols + 1 - i);
            let b = mx.get(RowKey::VX(j), i) + mx.get(RowKey::UX(j), cols + 1 - i);
            if a != cross || b != cross {
                cp.push(format!("j={j}, i={i}: {a}, {b} != {cross}"));
            }
        }
    }
    ck.record("cross-pairs", cp);

    let want = closed_form::x_all(parity, n, k);
    ck.record(
        "x-column-totals",
        (1..=m)
            .filter_map(|j| {
                let got: u64 = mx
                    .row(RowKey::UX(j))
                    .iter()
                    .chain(mx.row(RowKey::VX(j)))
                    .sum();
                (got != want).then(|| format!("j={j}: {got} != {want}"))
            })
            .collect(),
    );

    ObservationReport {
        parity,
        n: mx.n,
        k: mx.k,
        cross_pair_constant: cross,
        checks: ck.checks,
    }
}

/// All identities must hold; the first failing one is returned as an error.
pub fn check_observations(mx: &LabelMatrix) -> Result<ObservationReport, SchemeError> {
    let report = observe(mx);
    match report.first_failure() {
        None => Ok(report),
        Some(c) => Err(SchemeError::InvariantViolation {
            name: c.name.to_string(),
            detail: c.detail.clone(),
        }),
    }
}

/// The two merged x-vertices of `2P_2 ∨ O_2`, named as a column merge of
/// `2(P_2 ∨ O_2)` would name them.
pub fn special_x(j: u32) -> VertexId {
    VertexId::merged([VertexId::x(1, j), VertexId::x(2, j)]).unwrap()
}

/// `2P_2 ∨ O_2` with a local antimagic 3-colouring: u-vertices 19,
/// v-vertices 14, both x-vertices 22. Found by exhaustive search and frozen.
pub fn special_2p2_o2() -> (Graph, EdgeLabeling) {
    let g = Graph::disjoint_union(&[Graph::p2(1), Graph::p2(1)])
        .join(&Graph::null([special_x(1), special_x(2)]))
        .unwrap();
    let (u1, v1, u2, v2) = (
        VertexId::u(1),
        VertexId::v(1),
        VertexId::u(2),
        VertexId::v(2),
    );
    let (x1, x2) = (special_x(1), special_x(2));
    let table = [
        (&u1, &v1, 4),
        (&u1, &x1, 5),
        (&u1, &x2, 10),
        (&u2, &v2, 7),
        (&u2, &x1, 3),
        (&u2, &x2, 9),
        (&v1, &x1, 8),
        (&v1, &x2, 2),
        (&v2, &x1, 6),
        (&v2, &x2, 1),
    ];
    let labels = table
        .iter()
        .map(|(a, b, l)| (Edge::new((*a).clone(), (*b).clone()).unwrap(), *l))
        .collect();
    let l = EdgeLabeling::new(g.clone(), labels).unwrap();
    (g, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference matrix for n=2, k=4.
    const EVEN_2_4: [[u64; 8]; 9] = [
        [65, 66, 67, 68, 69, 70, 71, 72],
        [16, 15, 14, 13, 12, 11, 10, 9],
        [49, 53, 54, 55, 50, 51, 52, 56],
        [40, 41, 42, 43, 45, 46, 47, 48],
        [44, 39, 37, 35, 38, 36, 34, 29],
        [1, 2, 3, 4, 5, 6, 7, 8],
        [64, 63, 62, 61, 60, 59, 58, 57],
        [17, 21, 22, 23, 18, 19, 20, 24],
        [25, 26, 27, 28, 30, 31, 32, 33],
    ];

    #[test]
    fn even_2_4_matches_reference() {
        let mx = build_even_matrix(2, 4).unwrap();
        for (r, row) in EVEN_2_4.iter().enumerate() {
            assert_eq!(mx.rows()[r], row.to_vec(), "row {r}");
        }
        assert_eq!(mx.get(RowKey::UX(1), 1), 65);
        assert_eq!(mx.get(RowKey::UX(2), 1), 16);
        assert_eq!(mx.get(RowKey::UV, 1), 44);
        let t1: u64 = [RowKey::UX(3), RowKey::UX(4), RowKey::UV]
            .iter()
            .map(|&r| mx.get(r, 1))
            .sum();
        assert_eq!(t1, 133);
    }

    #[test]
    fn even_k1_column() {
        let mx = build_even_matrix(2, 1).unwrap();
        let col1: Vec<u64> = mx.rows().iter().map(|r| r[0]).collect();
        assert_eq!(col1, vec![17, 4, 13, 10, 11, 1, 16, 5, 7]);
        let all: BTreeSet<u64> = mx.rows().iter().flatten().copied().collect();
        assert_eq!(all, (1..=18).collect());
    }

    #[test]
    fn even_1_1_is_special() {
        assert_eq!(build_even_matrix(1, 1), Err(SchemeError::UseSpecialCase));
    }

    #[test]
    fn odd_2_3_rows() {
        let mx = build_odd_matrix(2, 3).unwrap();
        assert_eq!(mx.row(RowKey::UX(1)), &[66, 65, 64, 63, 62, 61]);
        assert_eq!(mx.row(RowKey::UV), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(mx.row(RowKey::VX(5)), &[36, 35, 34, 33, 32, 31]);
        let u: u64 = (1..=5).map(|j| mx.get(RowKey::UX(j), 1)).sum::<u64>() + 1;
        assert_eq!(u, 261);
    }

    #[test]
    fn odd_1_1_is_bijection() {
        let mx = build_odd_matrix(1, 1).unwrap();
        let all: BTreeSet<u64> = mx.rows().iter().flatten().copied().collect();
        assert_eq!(all, (1..=14).collect());
    }

    #[test]
    fn observations_hold() {
        let r = check_observations(&build_even_matrix(2, 4).unwrap()).unwrap();
        assert_eq!(r.cross_pair_constant, 73);
        let mx = build_odd_matrix(2, 3).unwrap();
        assert_eq!(mx.get(RowKey::UX(1), 1) + mx.get(RowKey::VX(1), 6), 73);
        let r = check_observations(&mx).unwrap();
        assert_eq!(r.cross_pair_constant, 73);
    }

    #[test]
    fn swapped_entries_break_column_sums_only() {
        let mut mx = build_even_matrix(2, 4).unwrap();
        mx.swap((RowKey::UX(1), 1), (RowKey::VX(1), 1));
        let r = observe(&mx);
        let by_name: BTreeMap<_, _> = r.checks.iter().map(|c| (c.name, c.passed)).collect();
        assert!(by_name["bijection"]);
        assert!(!by_name["u-block-sum"]);
        assert!(matches!(
            check_observations(&mx),
            Err(SchemeError::InvariantViolation { .. })
        ));
    }

    #[test]
    fn csv_roundtrip() {
        let mx = build_odd_matrix(2, 3).unwrap();
        let text = mx.to_csv();
        assert_eq!(text.lines().count(), 11);
        assert_eq!(text.lines().next(), Some("66,65,64,63,62,61"));
        assert_eq!(LabelMatrix::from_csv(&text).unwrap(), mx);
    }

    #[test]
    fn special_case_colours() {
        let (g, l) = special_2p2_o2();
        assert_eq!((g.order(), g.size()), (6, 10));
        let c = l.induce();
        assert_eq!(c.color_set(), BTreeSet::from([14, 19, 22]));
        assert_eq!(c.total(), 110);
        assert_eq!(c.color(&special_x(1)), Some(22));
        assert_eq!(c.color(&special_x(2)), Some(22));
        assert_eq!(c.color(&VertexId::u(1)), Some(19));
        assert_eq!(c.color(&VertexId::v(2)), Some(14));
        assert!(l.is_local_antimagic().is_ok());
    }
}
