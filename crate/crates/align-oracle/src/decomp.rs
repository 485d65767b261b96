//! Recursive rectangle decomposition of the grid and the pruned division
//! tree used by the oracle.
//!
//! The decomposition tree splits the padded grid's longer side in half
//! (sharing the middle row or column) down to 2x2-vertex leaves, so every
//! piece spans `(2^c + 1) x (2^d + 1)` vertices. The division tree marks a
//! geometrically growing subset of depths as levels `1..=t` (level `t` is the
//! whole grid) and attaches one level-0 singleton per vertex.
//!
//! Boundary conventions: `bot(P)` is the bottom row followed by the right
//! column, `top(P)` the left column followed by the top row, both ordered
//! from the bottom-left corner to the top-right corner so that adjacent
//! vertices are consecutive. `out(P)` is everything dominating `P`'s top-left
//! corner except `P`'s rectangle interior; every path from inside `P` to
//! `out(P)` passes through `bot(P)`.

use crate::grid::Vertex;
use alloc::vec;
use alloc::vec::Vec;

/// Index of a piece in the decomposition tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PieceId(pub u32);

/// Inclusive vertex rectangle `[x1..=x2] x [y1..=y2]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Rect {
    pub x1: u32,
    pub x2: u32,
    pub y1: u32,
    pub y2: u32,
}

impl Rect {
    pub fn new(x1: u32, x2: u32, y1: u32, y2: u32) -> Self {
        Rect { x1, x2, y1, y2 }
    }

    pub fn height(&self) -> usize {
        (self.x2 - self.x1 + 1) as usize
    }

    pub fn width(&self) -> usize {
        (self.y2 - self.y1 + 1) as usize
    }

    /// Number of vertices in the rectangle.
    pub fn area(&self) -> usize {
        self.height() * self.width()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.x1 <= v.x && v.x <= self.x2 && self.y1 <= v.y && v.y <= self.y2
    }

    /// Strictly inside the rectangle (not on its perimeter).
    pub fn is_interior(&self, v: Vertex) -> bool {
        self.x1 < v.x && v.x < self.x2 && self.y1 < v.y && v.y < self.y2
    }

    /// On the bottom row or the right column.
    pub fn on_bot(&self, v: Vertex) -> bool {
        self.contains(v) && (v.x == self.x2 || v.y == self.y2)
    }

    /// On the left column or the top row.
    pub fn on_top(&self, v: Vertex) -> bool {
        self.contains(v) && (v.x == self.x1 || v.y == self.y1)
    }

    /// In `out(self)`: dominates the top-left corner but is not interior.
    pub fn in_out(&self, v: Vertex) -> bool {
        v.x >= self.x1 && v.y >= self.y1 && !self.is_interior(v)
    }

    /// Number of vertices of `bot` (equals that of `top`).
    pub fn bot_len(&self) -> usize {
        self.width() + self.height() - 1
    }

    /// `bot(P)`: bottom row left-to-right, then right column bottom-to-top.
    /// Starts at the bottom-left corner, ends at the top-right corner.
    pub fn bot_seq(&self) -> impl Iterator<Item = Vertex> + '_ {
        let row = (self.y1..=self.y2).map(move |y| Vertex::new(self.x2, y));
        let col = (self.x1..self.x2)
            .rev()
            .map(move |x| Vertex::new(x, self.y2));
        row.chain(col)
    }

    /// `top(P)`: left column bottom-to-top, then top row left-to-right.
    /// Starts at the bottom-left corner, ends at the top-right corner.
    pub fn top_seq(&self) -> impl Iterator<Item = Vertex> + '_ {
        let col = (self.x1..=self.x2)
            .rev()
            .map(move |x| Vertex::new(x, self.y1));
        let row = (self.y1 + 1..=self.y2).map(move |y| Vertex::new(self.x1, y));
        col.chain(row)
    }

    /// Position of `v` in `bot_seq`, if any.
    pub fn bot_index(&self, v: Vertex) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        if v.x == self.x2 {
            Some((v.y - self.y1) as usize)
        } else if v.y == self.y2 {
            Some(self.width() + (self.x2 - v.x) as usize - 1)
        } else {
            None
        }
    }

    /// The `i`-th vertex of `bot_seq`.
    pub fn bot_at(&self, i: usize) -> Vertex {
        if i < self.width() {
            Vertex::new(self.x2, self.y1 + i as u32)
        } else {
            Vertex::new(self.x2 - (i - self.width()) as u32 - 1, self.y2)
        }
    }
}

struct Node {
    rect: Rect,
    parent: Option<PieceId>,
    children: Option<(PieceId, PieceId)>,
    depth: u32,
}

/// The full binary decomposition tree of the padded grid.
pub struct Decomposition {
    nodes: Vec<Node>,
    /// Piece ids grouped by depth, in left-to-right construction order.
    by_depth: Vec<Vec<PieceId>>,
}

impl Decomposition {
    /// Split the `(rows x cols)`-vertex grid down to 2x2 leaves. Both
    /// dimensions must be `2^a + 1`. The longer side is split (ties split
    /// rows); the halves share the middle row or column.
    pub fn build(rows: usize, cols: usize) -> Decomposition {
        assert!((rows - 1).is_power_of_two() && (cols - 1).is_power_of_two());
        let root = Rect::new(0, (rows - 1) as u32, 0, (cols - 1) as u32);
        let mut d = Decomposition {
            nodes: Vec::new(),
            by_depth: Vec::new(),
        };
        d.nodes.push(Node {
            rect: root,
            parent: None,
            children: None,
            depth: 0,
        });
        let mut frontier = vec![PieceId(0)];
        while !frontier.is_empty() {
            d.by_depth.push(frontier.clone());
            let mut next = Vec::new();
            for id in frontier {
                let (rect, depth) = {
                    let n = &d.nodes[id.0 as usize];
                    (n.rect, n.depth)
                };
                if rect.height() == 2 && rect.width() == 2 {
                    continue;
                }
                let (ra, rb) = if rect.height() >= rect.width() {
                    let mid = (rect.x1 + rect.x2) / 2;
                    (
                        Rect::new(rect.x1, mid, rect.y1, rect.y2),
                        Rect::new(mid, rect.x2, rect.y1, rect.y2),
                    )
                } else {
                    let mid = (rect.y1 + rect.y2) / 2;
                    (
                        Rect::new(rect.x1, rect.x2, rect.y1, mid),
                        Rect::new(rect.x1, rect.x2, mid, rect.y2),
                    )
                };
                let a = PieceId(d.nodes.len() as u32);
                d.nodes.push(Node {
                    rect: ra,
                    parent: Some(id),
                    children: None,
                    depth: depth + 1,
                });
                let b = PieceId(d.nodes.len() as u32);
                d.nodes.push(Node {
                    rect: rb,
                    parent: Some(id),
                    children: None,
                    depth: depth + 1,
                });
                d.nodes[id.0 as usize].children = Some((a, b));
                next.push(a);
                next.push(b);
            }
            frontier = next;
        }
        d
    }

    pub fn root(&self) -> PieceId {
        PieceId(0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn rect(&self, p: PieceId) -> Rect {
        self.nodes[p.0 as usize].rect
    }

    pub fn parent(&self, p: PieceId) -> Option<PieceId> {
        self.nodes[p.0 as usize].parent
    }

    pub fn children(&self, p: PieceId) -> Option<(PieceId, PieceId)> {
        self.nodes[p.0 as usize].children
    }

    pub fn depth(&self, p: PieceId) -> u32 {
        self.nodes[p.0 as usize].depth
    }

    pub fn max_depth(&self) -> u32 {
        (self.by_depth.len() - 1) as u32
    }

    pub fn pieces_at_depth(&self, depth: u32) -> &[PieceId] {
        &self.by_depth[depth as usize]
    }

    /// Sibling of `p`, if `p` is not the root.
    pub fn sibling(&self, p: PieceId) -> Option<PieceId> {
        let parent = self.parent(p)?;
        let (a, b) = self.children(parent).unwrap();
        Some(if a == p { b } else { a })
    }

    /// Ordered cover of `out(q)` by pieces internally disjoint from `q`: the
    /// siblings of `q`'s weak ancestors that intersect `out(q)`, from `q`'s
    /// own sibling upward. Each piece stands for its intersection with
    /// `out(q)`. Parts of `out(q)` on the grid's bottom row or right column
    /// inside `rect(q)` are not covered; the Voronoi builder sweeps those two
    /// lines separately.
    pub fn cover_outside(&self, q: PieceId) -> Vec<PieceId> {
        let qr = self.rect(q);
        let mut cover = Vec::new();
        let mut cur = q;
        while let Some(sib) = self.sibling(cur) {
            let r = self.rect(sib);
            // Nonempty intersection with out(q): some vertex of r dominates
            // q's top-left corner (r never meets q's interior).
            if r.x2 >= qr.x1 && r.y2 >= qr.y1 {
                cover.push(sib);
            }
            cur = self.parent(cur).unwrap();
        }
        cover
    }
}

/// The pruned division tree: levels `t..=1` of pieces plus per-vertex
/// singleton attachment.
pub struct Division {
    /// `levels[i]` holds the pieces of level `i+1` (level index `i+1`);
    /// `levels[t-1]` is the root alone.
    levels: Vec<Vec<PieceId>>,
    /// Division-tree parent: for a piece at level `i`, the level-`i+1` piece
    /// containing it.
    div_parent: Vec<Option<PieceId>>,
    /// Division level of a piece, if it is on one.
    div_level: Vec<Option<u32>>,
    /// Attached level-1 piece per vertex (the parent of the singleton).
    attach: Vec<PieceId>,
    cols: usize,
}

impl Division {
    /// Mark depths of `decomp` as division levels. Level 1 pieces have at
    /// most `leaf_target` vertices and consecutive levels' sizes differ by
    /// roughly `ratio`. Level 0 singletons attach to a level-1 piece
    /// containing the vertex, preferring one whose `bot` contains it.
    pub fn build(decomp: &Decomposition, ratio: usize, leaf_target: usize) -> Division {
        assert!(ratio >= 2);
        let max_depth = decomp.max_depth();
        let size_at = |d: u32| decomp.rect(decomp.pieces_at_depth(d)[0]).area();
        // Deepest-first: level 1 is the smallest-depth rectangle not larger
        // than leaf_target; each next level multiplies the target by ratio.
        let mut marked = Vec::new();
        let mut target = leaf_target.max(4);
        loop {
            let mut depth = max_depth;
            while depth > 0 && size_at(depth - 1) <= target {
                depth -= 1;
            }
            if marked.last() == Some(&depth) {
                // ratio too small to move a whole depth; force progress
                depth = marked.last().unwrap().saturating_sub(1);
                let _ = marked.pop();
                marked.push(depth);
            }
            if marked.last() != Some(&depth) {
                marked.push(depth);
            }
            if depth == 0 {
                break;
            }
            target = target.saturating_mul(ratio);
        }
        // marked is decreasing; marked[0] = level-1 depth, last = 0 (root).
        let mut div_parent = vec![None; decomp.node_count()];
        let mut div_level = vec![None; decomp.node_count()];
        let mut levels = Vec::new();
        for (idx, &depth) in marked.iter().enumerate() {
            let level = (idx + 1) as u32;
            let pieces: Vec<PieceId> = decomp.pieces_at_depth(depth).to_vec();
            for &p in &pieces {
                div_level[p.0 as usize] = Some(level);
                if idx + 1 < marked.len() {
                    // Walk up to the ancestor at the next marked depth.
                    let mut anc = p;
                    while decomp.depth(anc) != marked[idx + 1] {
                        anc = decomp.parent(anc).unwrap();
                    }
                    div_parent[p.0 as usize] = Some(anc);
                }
            }
            levels.push(pieces);
        }

        // Singleton attachment: prefer a level-1 piece with the vertex on its
        // bot; ties and fallback resolved by smallest piece id.
        let root = decomp.rect(decomp.root());
        let cols = root.width();
        let rows = root.height();
        let mut attach = vec![PieceId(u32::MAX); rows * cols];
        let mut fallback = vec![PieceId(u32::MAX); rows * cols];
        for &p in &levels[0] {
            let r = decomp.rect(p);
            for x in r.x1..=r.x2 {
                for y in r.y1..=r.y2 {
                    let v = Vertex::new(x, y);
                    let slot = x as usize * cols + y as usize;
                    if r.on_bot(v) {
                        if attach[slot] == PieceId(u32::MAX) {
                            attach[slot] = p;
                        }
                    } else if fallback[slot] == PieceId(u32::MAX) {
                        fallback[slot] = p;
                    }
                }
            }
        }
        for slot in 0..attach.len() {
            if attach[slot] == PieceId(u32::MAX) {
                attach[slot] = fallback[slot];
            }
            debug_assert!(attach[slot] != PieceId(u32::MAX));
        }

        Division {
            levels,
            div_parent,
            div_level,
            attach,
            cols,
        }
    }

    /// Number of levels above the singletons; level `t` is the whole grid.
    pub fn t(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn pieces_at_level(&self, level: u32) -> &[PieceId] {
        &self.levels[(level - 1) as usize]
    }

    pub fn div_parent(&self, p: PieceId) -> Option<PieceId> {
        self.div_parent[p.0 as usize]
    }

    pub fn level_of(&self, p: PieceId) -> Option<u32> {
        self.div_level[p.0 as usize]
    }

    /// The level-1 piece the singleton `{v}` is attached to.
    pub fn attach(&self, v: Vertex) -> PieceId {
        self.attach[v.x as usize * self.cols + v.y as usize]
    }

    /// `u`'s ancestor chain `R_1, ..., R_t` in the division tree.
    pub fn chain(&self, u: Vertex) -> Chain<'_> {
        Chain {
            div: self,
            cur: Some(self.attach(u)),
        }
    }

    /// Ancestor piece of `u` at the given level (1-based).
    pub fn ancestor_at(&self, u: Vertex, level: u32) -> PieceId {
        self.chain(u)
            .nth((level - 1) as usize)
            .expect("level within 1..=t")
    }

    /// Largest `i` with `u` on `bot(R_i)`; 0 when `u` is not even on the bot
    /// of its level-1 piece (the singleton counts as its own bot).
    pub fn lev(&self, decomp: &Decomposition, u: Vertex) -> u32 {
        let mut lev = 0;
        for (i, p) in self.chain(u).enumerate() {
            if decomp.rect(p).on_bot(u) {
                lev = i as u32 + 1;
            } else {
                break;
            }
        }
        lev
    }

    /// Smallest `i` such that `v` lies in `R_i`'s rectangle but not on its
    /// bot; falls back to `t` (where `v` is always inside the grid, possibly
    /// on the grid's own bottom row or right column).
    pub fn anc(&self, decomp: &Decomposition, u: Vertex, v: Vertex) -> u32 {
        for (i, p) in self.chain(u).enumerate() {
            let r = decomp.rect(p);
            if r.contains(v) && !r.on_bot(v) {
                return i as u32 + 1;
            }
        }
        self.t()
    }
}

pub struct Chain<'a> {
    div: &'a Division,
    cur: Option<PieceId>,
}

impl Iterator for Chain<'_> {
    type Item = PieceId;

    fn next(&mut self) -> Option<PieceId> {
        let cur = self.cur?;
        self.cur = self.div.div_parent(cur);
        Some(cur)
    }
}
