//! Strings, cost models, the implicit alignment grid graph, and the
//! brute-force DP oracle that grounds all testing.
//!
//! The alignment graph of `S` (length `m`) and `T` (length `n`) has a vertex
//! `(x, y)` for every `0 <= x <= m`, `0 <= y <= n`, with `(0,0)` the top-left
//! corner. Edges go right `(x,y) -> (x,y+1)`, down `(x,y) -> (x+1,y)` and
//! diagonally `(x,y) -> (x+1,y+1)`; which of these exist and what they weigh
//! is the [`CostModel`]'s business. Shortest-path distance from `(i,a)` to
//! `(j,b)` encodes the optimal alignment of `S[i..j)` and `T[a..b)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Sentinel codes appended when padding the strings to power-of-two lengths.
/// They are outside the byte alphabet and distinct from each other, so padded
/// positions never produce a match.
const S_PAD: u16 = 256;
const T_PAD: u16 = 257;

/// A grid vertex: `x` is the row (position in `S`), `y` the column (position
/// in `T`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Vertex {
    pub x: u32,
    pub y: u32,
}

impl Vertex {
    pub const fn new(x: u32, y: u32) -> Self {
        Vertex { x, y }
    }

    /// `self` dominates `other` componentwise, i.e. `other` can reach `self`
    /// by monotone (right/down) moves.
    pub fn dominates(&self, other: Vertex) -> bool {
        self.x >= other.x && self.y >= other.y
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Errors when constructing a graph or a cost model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    EmptyString,
    /// Weight triples must satisfy `2*w_match > 2*w_mis >= w_del`.
    WeightOrder,
    /// The transformed deletion weight `w_match/2 - w_del` would be negative.
    NegativeTransformedWeight,
    /// Distances would not fit the internal 32-bit arrays.
    WeightOverflow,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::EmptyString => write!(f, "input strings must be nonempty"),
            BuildError::WeightOrder => {
                write!(f, "weights must satisfy 2*w_match > 2*w_mis >= w_del")
            }
            BuildError::NegativeTransformedWeight => {
                write!(
                    f,
                    "transformed deletion weight w_match/2 - w_del is negative"
                )
            }
            BuildError::WeightOverflow => write!(f, "weights too large for internal arithmetic"),
        }
    }
}

/// Errors for raw vertex queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryError {
    OutOfGrid(Vertex),
    OutOfRange {
        i: usize,
        j: usize,
        a: usize,
        b: usize,
    },
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::OutOfGrid(v) => write!(f, "vertex {v} outside the grid"),
            QueryError::OutOfRange { i, j, a, b } => {
                write!(f, "query ({i},{j},{a},{b}) violates 0<=i<=j<=m, 0<=a<=b<=n")
            }
        }
    }
}

/// Edge-weight policy of the alignment graph.
///
/// `Lcs` is the unit-length graph: horizontal/vertical edges weigh 1 and a
/// diagonal edge exists (weight 1) only where characters match, so the LCS
/// length of the substrings is `(j-i) + (b-a) - dist`.
///
/// `Levenshtein` always has the diagonal: weight 0 on match, 1 on mismatch;
/// the distance *is* the edit distance.
///
/// `Weighted` carries a maximization scoring scheme (`w_match` per aligned
/// matching pair, `w_mis` per aligned mismatching pair, `w_del` per unaligned
/// character) turned into nonnegative edge weights: weights are doubled at
/// ingestion so the transformed deletion weight `w_match/2 - w_del` stays
/// integral, matching pairs cost 0, mismatching pairs `w_match - w_mis` and
/// unaligned characters `w_match/2 - w_del` (all in doubled units). The score
/// is recovered from the distance by [`CostModel::score_from_distance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostModel {
    Lcs,
    Levenshtein,
    Weighted {
        /// Original (pre-doubling) match score; recovery constant.
        match_score: u64,
        /// Edge weight of a mismatching diagonal, in doubled units.
        mis_cost: u64,
        /// Edge weight of horizontal/vertical edges, in doubled units.
        del_cost: u64,
    },
}

impl CostModel {
    /// Build the weighted model from original integer scores, doubling them
    /// internally. Requires `2*w_match > 2*w_mis >= w_del` and a nonnegative
    /// transformed deletion weight (`w_match >= 2*w_del`).
    pub fn weighted(w_match: u64, w_mis: u64, w_del: u64) -> Result<CostModel, BuildError> {
        if !(2 * w_match > 2 * w_mis && 2 * w_mis >= w_del) {
            return Err(BuildError::WeightOrder);
        }
        if w_match < 2 * w_del {
            return Err(BuildError::NegativeTransformedWeight);
        }
        if w_match > u32::MAX as u64 / 8 {
            return Err(BuildError::WeightOverflow);
        }
        Ok(CostModel::Weighted {
            match_score: w_match,
            mis_cost: 2 * w_match - 2 * w_mis,
            del_cost: w_match - 2 * w_del,
        })
    }

    /// Weight of a horizontal or vertical edge.
    pub fn step_weight(&self) -> u64 {
        match *self {
            CostModel::Lcs | CostModel::Levenshtein => 1,
            CostModel::Weighted { del_cost, .. } => del_cost,
        }
    }

    /// Weight of the diagonal edge given whether the characters match;
    /// `None` when the edge does not exist.
    pub fn diag_weight(&self, matched: bool) -> Option<u64> {
        match *self {
            CostModel::Lcs => matched.then_some(1),
            CostModel::Levenshtein => Some(if matched { 0 } else { 1 }),
            CostModel::Weighted { mis_cost, .. } => Some(if matched { 0 } else { mis_cost }),
        }
    }

    /// Upper bound `w` on the absolute weight of any edge.
    pub fn weight_bound(&self) -> u64 {
        match *self {
            CostModel::Lcs | CostModel::Levenshtein => 1,
            CostModel::Weighted {
                mis_cost, del_cost, ..
            } => mis_cost.max(del_cost).max(1),
        }
    }

    /// Convert the `(i,a) -> (j,b)` distance `d` into the model's score for
    /// aligning `S[i..j)` with `T[a..b)`.
    ///
    /// Panics if `d` is inconsistent with the substring lengths; that means a
    /// broken oracle, never bad user input.
    pub fn score_from_distance(&self, i: usize, j: usize, a: usize, b: usize, d: u64) -> u64 {
        let len = (j - i + b - a) as u64;
        match *self {
            CostModel::Lcs => len.checked_sub(d).expect("distance exceeds |S'|+|T'|"),
            CostModel::Levenshtein => d,
            CostModel::Weighted { match_score, .. } => {
                let doubled = (len * match_score)
                    .checked_sub(d)
                    .expect("distance exceeds the all-match score");
                assert!(doubled.is_multiple_of(2), "weighted score parity violated");
                doubled / 2
            }
        }
    }
}

/// The implicit alignment graph of two byte strings, padded so that both
/// dimensions are powers of two. Padding characters are distinct sentinels
/// that match nothing; monotone paths between original vertices never depend
/// on them.
#[derive(Clone, Debug)]
pub struct AlignmentGraph {
    s: Vec<u16>,
    t: Vec<u16>,
    m: usize,
    n: usize,
    cost: CostModel,
}

impl AlignmentGraph {
    pub fn new(s: &[u8], t: &[u8], cost: CostModel) -> Result<AlignmentGraph, BuildError> {
        if s.is_empty() || t.is_empty() {
            return Err(BuildError::EmptyString);
        }
        let mp = s.len().next_power_of_two();
        let np = t.len().next_power_of_two();
        // Longest possible path visits every row and column once.
        let max_dist = (mp as u64 + np as u64 + 2) * cost.weight_bound();
        if max_dist >= u32::MAX as u64 / 2 {
            return Err(BuildError::WeightOverflow);
        }
        let mut sp: Vec<u16> = s.iter().map(|&c| c as u16).collect();
        sp.resize(mp, S_PAD);
        let mut tp: Vec<u16> = t.iter().map(|&c| c as u16).collect();
        tp.resize(np, T_PAD);
        Ok(AlignmentGraph {
            s: sp,
            t: tp,
            m: s.len(),
            n: t.len(),
            cost,
        })
    }

    /// Original string lengths.
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Padded lengths (powers of two); the grid has `rows() x cols()` vertices.
    pub fn m_pad(&self) -> usize {
        self.s.len()
    }
    pub fn n_pad(&self) -> usize {
        self.t.len()
    }
    pub fn rows(&self) -> usize {
        self.s.len() + 1
    }
    pub fn cols(&self) -> usize {
        self.t.len() + 1
    }
    pub fn cost(&self) -> CostModel {
        self.cost
    }
    pub fn s_char(&self, x: usize) -> u16 {
        self.s[x]
    }
    pub fn t_char(&self, y: usize) -> u16 {
        self.t[y]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v.x as usize) < self.rows() && (v.y as usize) < self.cols()
    }

    /// Row-major vertex id.
    pub fn vid(&self, v: Vertex) -> usize {
        v.x as usize * self.cols() + v.y as usize
    }

    pub fn num_vertices(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Weight of every horizontal/vertical edge.
    pub fn step(&self) -> u64 {
        self.cost.step_weight()
    }

    /// Weight of the diagonal edge leaving `(x, y)`, if it exists.
    /// `x`, `y` index characters, so `x < m_pad()` and `y < n_pad()`.
    pub fn diag(&self, x: usize, y: usize) -> Option<u64> {
        self.cost.diag_weight(self.s[x] == self.t[y])
    }
}

/// Textbook dynamic programming over the rectangle spanned by the query; the
/// reference oracle every other backend is tested against.
#[derive(Clone, Copy)]
pub struct DpOracle<'a> {
    g: &'a AlignmentGraph,
}

impl<'a> DpOracle<'a> {
    pub fn new(g: &'a AlignmentGraph) -> Self {
        DpOracle { g }
    }

    /// Exact shortest-path distance from `u` to `v`; `None` when `v` is not
    /// reachable (strictly above or left of `u`).
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<u64>, QueryError> {
        for w in [u, v] {
            if !self.g.contains(w) {
                return Err(QueryError::OutOfGrid(w));
            }
        }
        if !v.dominates(u) {
            return Ok(None);
        }
        let table = dp_from(self.g, u, v);
        Ok(Some(table[table.len() - 1]))
    }

    /// Alignment score of `S[i..j)` vs `T[a..b)` under the graph's cost model.
    pub fn score(&self, i: usize, j: usize, a: usize, b: usize) -> Result<u64, QueryError> {
        if i > j || j > self.g.m() || a > b || b > self.g.n() {
            return Err(QueryError::OutOfRange { i, j, a, b });
        }
        let d = self
            .distance(
                Vertex::new(i as u32, a as u32),
                Vertex::new(j as u32, b as u32),
            )?
            .expect("alignment endpoints are always reachable");
        Ok(self.g.cost().score_from_distance(i, j, a, b, d))
    }

    /// A shortest `u -> v` path, reconstructed by DP traceback.
    pub fn trace(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        dp_trace(self.g, u, v)
    }
}

/// DP table of distances from `u` to every vertex of the rectangle
/// `[u.x..=v.x] x [u.y..=v.y]`, row-major with `v.y - u.y + 1` columns.
pub fn dp_from(g: &AlignmentGraph, u: Vertex, v: Vertex) -> Vec<u64> {
    debug_assert!(v.dominates(u));
    let w = (v.y - u.y + 1) as usize;
    let h = (v.x - u.x + 1) as usize;
    let step = g.step();
    let mut table = vec![0u64; w * h];
    for dx in 0..h {
        for dy in 0..w {
            if dx == 0 && dy == 0 {
                continue;
            }
            let mut best = u64::MAX;
            if dy > 0 {
                best = best.min(table[dx * w + dy - 1] + step);
            }
            if dx > 0 {
                best = best.min(table[(dx - 1) * w + dy] + step);
            }
            if dx > 0 && dy > 0 {
                let x = u.x as usize + dx - 1;
                let y = u.y as usize + dy - 1;
                if let Some(dw) = g.diag(x, y) {
                    best = best.min(table[(dx - 1) * w + dy - 1] + dw);
                }
            }
            table[dx * w + dy] = best;
        }
    }
    table
}

/// Shortest `u -> v` path by traceback over [`dp_from`], preferring the
/// diagonal, then the vertical, then the horizontal predecessor (the same
/// tie order the shortest-path forests use).
pub fn dp_trace(g: &AlignmentGraph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    debug_assert!(v.dominates(u));
    let table = dp_from(g, u, v);
    let w = (v.y - u.y + 1) as usize;
    let step = g.step();
    let mut path = vec![v];
    let (mut dx, mut dy) = ((v.x - u.x) as usize, (v.y - u.y) as usize);
    while dx > 0 || dy > 0 {
        let here = table[dx * w + dy];
        if dx > 0 && dy > 0 {
            let x = u.x as usize + dx - 1;
            let y = u.y as usize + dy - 1;
            if let Some(dw) = g.diag(x, y) {
                if table[(dx - 1) * w + dy - 1] + dw == here {
                    dx -= 1;
                    dy -= 1;
                    path.push(Vertex::new(u.x + dx as u32, u.y + dy as u32));
                    continue;
                }
            }
        }
        if dx > 0 && table[(dx - 1) * w + dy] + step == here {
            dx -= 1;
        } else {
            debug_assert!(dy > 0 && table[dx * w + dy - 1] + step == here);
            dy -= 1;
        }
        path.push(Vertex::new(u.x + dx as u32, u.y + dy as u32));
    }
    path.reverse();
    path
}

/// Weight of the edge between two adjacent grid vertices, if it exists.
pub fn edge_weight(g: &AlignmentGraph, from: Vertex, to: Vertex) -> Option<u64> {
    let (dx, dy) = (to.x as i64 - from.x as i64, to.y as i64 - from.y as i64);
    match (dx, dy) {
        (0, 1) | (1, 0) => Some(g.step()),
        (1, 1) => g.diag(from.x as usize, from.y as usize),
        _ => None,
    }
}
