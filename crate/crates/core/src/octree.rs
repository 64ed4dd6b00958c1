//! Fixed-depth presence octree over quantized color paths.
//!
//! Nodes carry no payload: a color is "in" the tree when the full path of
//! its octant indices, most significant bit first, exists. Nodes live in an
//! arena; slot value 0 marks an absent child since the root (index 0) is
//! never anyone's child.

use std::collections::BTreeSet;

use crate::color::{child_index, Color};
use crate::error::{Error, Result};

const ABSENT: u32 = 0;
const ROOT: usize = 0;

type Node = [u32; 8];

#[derive(Clone, Debug)]
pub struct Octree {
    depth: u8,
    nodes: Vec<Node>,
}

/// Structural equality; arena order is irrelevant.
impl PartialEq for Octree {
    fn eq(&self, other: &Self) -> bool {
        if self.depth != other.depth || self.nodes.len() != other.nodes.len() {
            return false;
        }
        let (mut a, mut b) = (Vec::new(), Vec::new());
        self.write_preorder(&mut a);
        other.write_preorder(&mut b);
        a == b
    }
}

impl Eq for Octree {}

impl Octree {
    /// Creates an empty tree with `depth` levels below the root.
    pub fn new(depth: u8) -> Result<Self> {
        crate::check_levels(depth)?;
        Ok(Octree {
            depth,
            nodes: Vec::new(),
        })
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of nodes including the root; 0 for an empty tree.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Bit planes consumed by this tree, most significant first.
    fn bit_planes(&self) -> impl Iterator<Item = u8> {
        ((8 - self.depth)..8).rev()
    }

    fn alloc(&mut self) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push([ABSENT; 8]);
        id
    }

    fn ensure_root(&mut self) {
        if self.nodes.is_empty() {
            self.alloc();
        }
    }

    /// Inserts the path of `color`, creating nodes as needed. Storing a
    /// color whose path already exists is a no-op.
    pub fn store(&mut self, color: Color) {
        self.ensure_root();
        let mut node = ROOT;
        for bit in self.bit_planes() {
            let slot = child_index(color, bit);
            let mut next = self.nodes[node][slot];
            if next == ABSENT {
                next = self.alloc();
                self.nodes[node][slot] = next;
            }
            node = next as usize;
        }
    }

    /// True iff the full path of `color` exists.
    pub fn contains(&self, color: Color) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let mut node = ROOT;
        for bit in self.bit_planes() {
            match self.nodes[node][child_index(color, bit)] {
                ABSENT => return false,
                next => node = next as usize,
            }
        }
        true
    }

    /// Truncates every path to `new_depth` levels.
    pub fn prune(&self, new_depth: u8) -> Result<Octree> {
        if new_depth < 1 || new_depth > self.depth {
            return Err(Error::InvalidConfig(format!(
                "prune depth must be in 1..={}, got {new_depth}",
                self.depth
            )));
        }
        let mut out = Octree::new(new_depth)?;
        if self.is_empty() {
            return Ok(out);
        }
        out.alloc();
        self.copy_into(ROOT, &mut out, ROOT, 0, new_depth);
        Ok(out)
    }

    fn copy_into(&self, src: usize, out: &mut Octree, dst: usize, level: u8, limit: u8) {
        if level == limit {
            return;
        }
        for slot in 0..8 {
            let child = self.nodes[src][slot];
            if child != ABSENT {
                let id = out.alloc();
                out.nodes[dst][slot] = id;
                self.copy_into(child as usize, out, id as usize, level + 1, limit);
            }
        }
    }

    /// Zero-filled representative color of every leaf.
    pub fn leaf_colors(&self) -> BTreeSet<Color> {
        let mut colors = BTreeSet::new();
        if !self.is_empty() {
            self.collect_leaves(ROOT, 0, [0; 3], &mut colors);
        }
        colors
    }

    fn collect_leaves(&self, node: usize, level: u8, acc: [u8; 3], out: &mut BTreeSet<Color>) {
        if level == self.depth {
            out.insert(Color::from(acc));
            return;
        }
        let bit = 7 - level;
        for slot in 0..8 {
            let child = self.nodes[node][slot];
            if child != ABSENT {
                let acc = [
                    acc[0] | (((slot >> 2) & 1) as u8) << bit,
                    acc[1] | (((slot >> 1) & 1) as u8) << bit,
                    acc[2] | ((slot & 1) as u8) << bit,
                ];
                self.collect_leaves(child as usize, level + 1, acc, out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        let mut count = 0;
        let mut stack = vec![(ROOT, 0u8)];
        while let Some((node, level)) = stack.pop() {
            if level == self.depth {
                count += 1;
                continue;
            }
            for &child in &self.nodes[node] {
                if child != ABSENT {
                    stack.push((child as usize, level + 1));
                }
            }
        }
        count
    }

    /// Bit k set iff child k of `node` is present.
    fn child_mask(&self, node: usize) -> u8 {
        self.nodes[node]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != ABSENT)
            .fold(0u8, |m, (k, _)| m | (1 << k))
    }

    /// Appends the preorder child-bitmask encoding. An empty tree writes
    /// nothing; the enclosing format records presence separately.
    pub fn write_preorder(&self, out: &mut Vec<u8>) {
        if self.is_empty() {
            return;
        }
        let mut stack = vec![ROOT];
        while let Some(node) = stack.pop() {
            out.push(self.child_mask(node));
            for &child in self.nodes[node].iter().rev() {
                if child != ABSENT {
                    stack.push(child as usize);
                }
            }
        }
    }

    /// Decodes a non-empty tree from its preorder encoding, returning the
    /// tree and the number of bytes consumed. Every leaf must sit at exactly
    /// `depth` levels.
    pub fn read_preorder(bytes: &[u8], depth: u8) -> Result<(Octree, usize)> {
        let mut tree = Octree::new(depth)?;
        tree.alloc();
        let mut pos = 0;
        tree.read_node(bytes, &mut pos, ROOT, 0)?;
        Ok((tree, pos))
    }

    fn read_node(&mut self, bytes: &[u8], pos: &mut usize, node: usize, level: u8) -> Result<()> {
        let mask = *bytes
            .get(*pos)
            .ok_or_else(|| Error::ModelFormat(format!("tree truncated at byte {}", *pos)))?;
        if level == self.depth && mask != 0 {
            return Err(Error::ModelFormat(format!(
                "node below leaf depth {} at byte {}",
                self.depth, *pos
            )));
        }
        if level < self.depth && mask == 0 {
            return Err(Error::ModelFormat(format!(
                "leaf above depth {} at byte {}",
                self.depth, *pos
            )));
        }
        *pos += 1;
        for slot in 0..8 {
            if mask & (1 << slot) != 0 {
                let id = self.alloc();
                self.nodes[node][slot] = id;
                self.read_node(bytes, pos, id as usize, level + 1)?;
            }
        }
        Ok(())
    }

    /// Serializes as a presence byte followed by the preorder encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![u8::from(!self.is_empty())];
        self.write_preorder(&mut out);
        out
    }

    /// Inverse of [`Octree::to_bytes`]; trailing bytes are rejected.
    pub fn from_bytes(bytes: &[u8], depth: u8) -> Result<Octree> {
        let (tree, used) = match bytes.first() {
            Some(0) => (Octree::new(depth)?, 1),
            Some(1) => {
                let (tree, used) = Octree::read_preorder(&bytes[1..], depth)?;
                (tree, used + 1)
            }
            Some(flag) => return Err(Error::ModelFormat(format!("bad presence flag {flag}"))),
            None => return Err(Error::ModelFormat("empty input".into())),
        };
        if used != bytes.len() {
            return Err(Error::ModelFormat(format!(
                "{} trailing bytes after tree",
                bytes.len() - used
            )));
        }
        Ok(tree)
    }
}

/// Merges trees of equal depth, keeping a child slot wherever the fraction
/// of input trees holding that path is at least `threshold`.
///
/// The denominator is always `trees.len()`, empty trees included. Branches
/// that end above the leaf level are dropped so the result keeps uniform
/// depth.
pub(crate) fn merge(trees: &[&Octree], threshold: f64) -> Result<Octree> {
    let depth = match trees.first() {
        Some(t) => t.depth,
        None => return Err(Error::InvalidConfig("merge needs at least one tree".into())),
    };
    if let Some(t) = trees.iter().find(|t| t.depth != depth) {
        return Err(Error::DepthMismatch {
            expected: depth,
            found: t.depth,
        });
    }
    let mut out = Octree::new(depth)?;
    let cursors: Vec<Option<usize>> = trees
        .iter()
        .map(|t| (!t.is_empty()).then_some(ROOT))
        .collect();
    out.alloc();
    if !merge_node(trees, &cursors, threshold, &mut out, ROOT, 0) {
        out.nodes.clear();
    }
    Ok(out)
}

fn merge_node(
    trees: &[&Octree],
    cursors: &[Option<usize>],
    threshold: f64,
    out: &mut Octree,
    dst: usize,
    level: u8,
) -> bool {
    if level == out.depth {
        return true;
    }
    let total = trees.len() as f64;
    let mut any = false;
    for slot in 0..8 {
        let children: Vec<Option<usize>> = trees
            .iter()
            .zip(cursors)
            .map(|(t, c)| {
                c.and_then(|n| match t.nodes[n][slot] {
                    ABSENT => None,
                    child => Some(child as usize),
                })
            })
            .collect();
        let count = children.iter().filter(|c| c.is_some()).count();
        if count == 0 || (count as f64) / total < threshold {
            continue;
        }
        let mark = out.nodes.len();
        let id = out.alloc();
        if merge_node(trees, &children, threshold, out, id as usize, level + 1) {
            out.nodes[dst][slot] = id;
            any = true;
        } else {
            out.nodes.truncate(mark);
        }
    }
    any
}
