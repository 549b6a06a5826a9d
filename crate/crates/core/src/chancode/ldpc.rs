//! Binary LDPC codes: progressive-edge-growth construction, systematic
//! encoding, normalized min-sum decoding and alist I/O.
//!
//! LLRs follow log P(0)/P(1): positive means bit 0.

use super::gf2::BitMatrix;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

pub const DEFAULT_MAX_ITERS: usize = 50;
pub const DEFAULT_NORMALIZATION: f64 = 0.75;

const CONSTRUCTION_RETRIES: u64 = 16;

/// A binary (N, K) LDPC code. Coordinates are ordered so that codewords read
/// [message | parity]; `parity` maps a message to its parity bits.
#[derive(Clone, Debug)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    /// Check indices of every variable node.
    var_checks: Vec<Vec<usize>>,
    /// Variable indices of every check node.
    check_vars: Vec<Vec<usize>>,
    parity: BitMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LdpcDecoded {
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Column-weight-`wc` PEG code. Rank-deficient graphs are rebuilt from a
/// derived seed a bounded number of times. When no attempt reaches full
/// rank (always the case for even `wc`, whose rows sum to zero) the graph of
/// highest rank is kept and the code dimension exceeds `k`.
pub fn build_regular_ldpc(n: usize, k: usize, wc: usize, seed: u64) -> Result<LdpcCode> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 < K < N, got N = {n}, K = {k}")));
    }
    let checks = n - k;
    if wc == 0 || wc > checks {
        return Err(Error::InvalidArgument(format!("column weight {wc} impossible with {checks} checks")));
    }
    let mut best: Option<LdpcCode> = None;
    for attempt in 0..CONSTRUCTION_RETRIES {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let var_checks = peg_graph(n, checks, wc, s);
        let Ok(code) = LdpcCode::from_graph(n, checks, var_checks) else {
            continue;
        };
        if code.k == k {
            return Ok(code);
        }
        if best.as_ref().is_none_or(|b| code.k < b.k) {
            best = Some(code);
        }
    }
    best.ok_or_else(|| Error::Construction(format!("no usable ({n},{k}) PEG graph")))
}

/// Progressive edge growth: every new edge of a variable node goes to the
/// lowest-degree check among those farthest from it in the current graph.
fn peg_graph(n: usize, m: usize, wc: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut var_checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut check_vars: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut depth = vec![usize::MAX; m];
    let mut seen_var = vec![false; n];

    for v in 0..n {
        for edge in 0..wc {
            let candidates: Vec<usize> = if edge == 0 {
                (0..m).collect()
            } else {
                farthest_checks(v, &var_checks, &check_vars, &mut depth, &mut seen_var)
            };
            let min_deg = candidates.iter().map(|&c| check_vars[c].len()).min().expect("candidates");
            let best: Vec<usize> = candidates
                .into_iter()
                .filter(|&c| check_vars[c].len() == min_deg && !var_checks[v].contains(&c))
                .collect();
            let c = if best.is_empty() {
                // Every minimum-degree check is already a neighbour; fall back
                // to the least-loaded check not yet used by this variable.
                (0..m)
                    .filter(|c| !var_checks[v].contains(c))
                    .min_by_key(|&c| check_vars[c].len())
                    .expect("wc <= m")
            } else {
                best[rng.random_range(0..best.len())]
            };
            var_checks[v].push(c);
            check_vars[c].push(v);
        }
    }
    for list in &mut var_checks {
        list.sort_unstable();
    }
    var_checks
}

/// Breadth-first expansion from `v`. Returns the checks it cannot reach, or
/// the ones reached last when the whole check set is reachable.
fn farthest_checks(
    v: usize,
    var_checks: &[Vec<usize>],
    check_vars: &[Vec<usize>],
    depth: &mut [usize],
    seen_var: &mut [bool],
) -> Vec<usize> {
    depth.fill(usize::MAX);
    seen_var.fill(false);
    let mut frontier: VecDeque<usize> = VecDeque::new();
    seen_var[v] = true;
    for &c in &var_checks[v] {
        depth[c] = 0;
        frontier.push_back(c);
    }
    let mut reached = frontier.len();
    let mut level = 0;
    let mut last_level: Vec<usize> = frontier.iter().copied().collect();
    loop {
        let mut next = Vec::new();
        while let Some(c) = frontier.pop_front() {
            for &u in &check_vars[c] {
                if seen_var[u] {
                    continue;
                }
                seen_var[u] = true;
                for &c2 in &var_checks[u] {
                    if depth[c2] == usize::MAX {
                        depth[c2] = level + 1;
                        next.push(c2);
                    }
                }
            }
        }
        if next.is_empty() {
            // Expansion stalled: prefer checks outside the reachable set.
            let unreached: Vec<usize> = (0..depth.len()).filter(|&c| depth[c] == usize::MAX).collect();
            return if unreached.is_empty() { last_level } else { unreached };
        }
        reached += next.len();
        if reached == depth.len() {
            return next;
        }
        level += 1;
        last_level = next.clone();
        frontier.extend(next);
    }
}

impl LdpcCode {
    /// Builds the code of a Tanner graph given as check lists per variable.
    /// Columns are reordered so that pivot columns of H become the parity
    /// block; K = N − rank(H).
    pub fn from_graph(n: usize, m: usize, var_checks: Vec<Vec<usize>>) -> Result<LdpcCode> {
        if var_checks.len() != n {
            return Err(Error::Dimension { expected: n, got: var_checks.len() });
        }
        let mut h = BitMatrix::zeros(m, n);
        for (v, checks) in var_checks.iter().enumerate() {
            for &c in checks {
                if c >= m {
                    return Err(Error::InvalidArgument(format!("check index {c} out of range")));
                }
                h.set(c, v, true);
            }
        }
        // Pivots are searched right to left, so a graph whose trailing
        // columns already form an invertible block keeps its column order.
        let mut reduced = h.clone();
        let pivots = reduced.row_reduce_in_order((0..n).rev());
        let rank = pivots.len();
        if rank == 0 {
            return Err(Error::Construction("parity-check matrix is zero".into()));
        }
        let k = n - rank;
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // New coordinate order: message columns, then pivot columns, each
        // ascending.
        let mut order: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut sorted_pivots = pivots.clone();
        sorted_pivots.sort_unstable();
        order.extend(&sorted_pivots);

        // Reduced row r has its only pivot-block 1 at pivots[r]; that parity
        // bit is the sum of the message bits the row touches.
        let mut parity = BitMatrix::zeros(k, rank);
        for (r, pc) in pivots.iter().enumerate() {
            let slot = sorted_pivots.binary_search(pc).expect("pivot present");
            for (i, &col) in order[..k].iter().enumerate() {
                if reduced.get(r, col) {
                    parity.set(i, slot, true);
                }
            }
        }

        let mut new_pos = vec![0usize; n];
        for (new_c, &old_c) in order.iter().enumerate() {
            new_pos[old_c] = new_c;
        }
        let mut new_var_checks = vec![Vec::new(); n];
        for (old_v, checks) in var_checks.into_iter().enumerate() {
            new_var_checks[new_pos[old_v]] = checks;
        }
        let mut check_vars = vec![Vec::new(); m];
        for (v, checks) in new_var_checks.iter().enumerate() {
            for &c in checks {
                check_vars[c].push(v);
            }
        }
        Ok(LdpcCode { n, k, var_checks: new_var_checks, check_vars, parity })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn checks(&self) -> usize {
        self.check_vars.len()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        self.var_checks.iter().map(Vec::len).collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.check_vars.iter().map(Vec::len).collect()
    }

    /// Dense H in the code's coordinate order.
    pub fn parity_check_matrix(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.checks(), self.n);
        for (v, checks) in self.var_checks.iter().enumerate() {
            for &c in checks {
                h.set(c, v, true);
            }
        }
        h
    }

    /// Dense systematic G = [I | P].
    pub fn generator_matrix(&self) -> BitMatrix {
        let mut g = BitMatrix::zeros(self.k, self.n);
        for i in 0..self.k {
            g.set(i, i, true);
            for r in 0..self.parity.cols() {
                if self.parity.get(i, r) {
                    g.set(i, self.k + r, true);
                }
            }
        }
        g
    }

    /// Length of the shortest cycle through the Tanner graph, 0 if acyclic.
    pub fn girth(&self) -> usize {
        let mut best = usize::MAX;
        let nodes = self.n + self.checks();
        // Node ids: variables 0..n, checks n..
        let neighbours = |x: usize| -> Vec<usize> {
            if x < self.n {
                self.var_checks[x].iter().map(|&c| self.n + c).collect()
            } else {
                self.check_vars[x - self.n].clone()
            }
        };
        for start in 0..self.n {
            let mut dist = vec![usize::MAX; nodes];
            let mut parent = vec![usize::MAX; nodes];
            let mut queue = VecDeque::from([start]);
            dist[start] = 0;
            while let Some(x) = queue.pop_front() {
                if 2 * dist[x] >= best {
                    break;
                }
                for y in neighbours(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            0
        } else {
            best
        }
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(Error::Dimension { expected: self.k, got: msg.len() });
        }
        let mut out = msg.to_vec();
        out.extend(self.parity.left_mul(msg));
        Ok(out)
    }

    pub fn syndrome_ok(&self, bits: &[u8]) -> bool {
        self.check_vars
            .iter()
            .all(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ bits[v]) == 0)
    }

    /// Flooding normalized min-sum. The returned word is the iterate with
    /// the fewest unsatisfied checks. Convergence needs a zero syndrome and
    /// no zero posterior.
    pub fn decode(&self, llr: &[f64], max_iters: usize, normalization: f64) -> LdpcDecoded {
        assert_eq!(llr.len(), self.n, "LLR length must equal N");
        let edges: usize = self.check_vars.iter().map(Vec::len).sum();
        let mut check_start = Vec::with_capacity(self.checks() + 1);
        let mut edge_var = Vec::with_capacity(edges);
        let mut var_edges: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for vars in &self.check_vars {
            check_start.push(edge_var.len());
            for &v in vars {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
        }
        check_start.push(edge_var.len());

        let mut q: Vec<f64> = edge_var.iter().map(|&v| llr[v]).collect();
        let mut r = vec![0.0f64; edges];
        let mut post = llr.to_vec();
        let mut hard = vec![0u8; self.n];
        let mut best = (usize::MAX, hard_decision(llr), 0usize);

        for iter in 1..=max_iters {
            for c in 0..self.checks() {
                let span = check_start[c]..check_start[c + 1];
                let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                let mut sign_neg = false;
                for e in span.clone() {
                    let a = q[e].abs();
                    sign_neg ^= q[e] < 0.0;
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        argmin = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for e in span {
                    let mag = if e == argmin { min2 } else { min1 };
                    let neg = sign_neg ^ (q[e] < 0.0);
                    r[e] = normalization * if neg { -mag } else { mag };
                }
            }
            let mut zero_post = false;
            for v in 0..self.n {
                let total = llr[v] + var_edges[v].iter().map(|&e| r[e]).sum::<f64>();
                post[v] = total;
                zero_post |= total == 0.0;
                hard[v] = u8::from(total < 0.0);
                for &e in &var_edges[v] {
                    q[e] = total - r[e];
                }
            }
            let unsatisfied = self
                .check_vars
                .iter()
                .filter(|vars| vars.iter().fold(0u8, |acc, &v| acc ^ hard[v]) == 1)
                .count();
            if unsatisfied < best.0 {
                best = (unsatisfied, hard.clone(), iter);
            }
            if unsatisfied == 0 && !zero_post {
                return LdpcDecoded { codeword: hard, converged: true, iterations: iter };
            }
        }
        LdpcDecoded { codeword: best.1, converged: false, iterations: max_iters }
    }

    /// MacKay alist text of H in the code's coordinate order.
    pub fn to_alist(&self) -> String {
        let mut s = String::new();
        let cw = self.column_weights();
        let rw = self.row_weights();
        s.push_str(&format!("{} {}\n", self.n, self.checks()));
        s.push_str(&format!("{} {}\n", cw.iter().max().unwrap_or(&0), rw.iter().max().unwrap_or(&0)));
        s.push_str(&join(&cw));
        s.push_str(&join(&rw));
        let max_c = *cw.iter().max().unwrap_or(&0);
        for checks in &self.var_checks {
            let mut line: Vec<usize> = checks.iter().map(|c| c + 1).collect();
            line.resize(max_c, 0);
            s.push_str(&join(&line));
        }
        let max_r = *rw.iter().max().unwrap_or(&0);
        for vars in &self.check_vars {
            let mut line: Vec<usize> = vars.iter().map(|v| v + 1).collect();
            line.resize(max_r, 0);
            s.push_str(&join(&line));
        }
        s
    }

    /// Reads an alist H; columns may be reordered to make encoding systematic.
    pub fn from_alist(text: &str) -> Result<LdpcCode> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse(format!("bad alist token `{t}`")))
        });
        let mut next = || nums.next().unwrap_or_else(|| Err(Error::Parse("truncated alist".into())));
        let n = next()?;
        let m = next()?;
        let max_c = next()?;
        let _max_r = next()?;
        let col_w = (0..n).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let _row_w = (0..m).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let mut var_checks = Vec::with_capacity(n);
        for &w in &col_w {
            let mut list = Vec::with_capacity(w);
            for slot in 0..max_c {
                let c = next()?;
                if slot < w {
                    if c == 0 || c > m {
                        return Err(Error::Parse(format!("check index {c} out of range")));
                    }
                    list.push(c - 1);
                }
            }
            var_checks.push(list);
        }
        LdpcCode::from_graph(n, m, var_checks)
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") + "\n"
}

pub fn hard_decision(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&l| u8::from(l < 0.0)).collect()
}
