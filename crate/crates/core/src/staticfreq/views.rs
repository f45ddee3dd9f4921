use std::collections::HashMap;

use crate::graph::Value;

/// Vertex label carried by views: input value and leader flag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub value: Value,
    pub leader: bool,
}

impl Label {
    pub fn new(value: Value, leader: bool) -> Self {
        Label { value, leader }
    }
}

/// Handle of an interned view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewId(u32);

/// In-tree node: label plus the sorted multiset of `(tag, child)` pairs,
/// one per incoming edge. The tag is whatever the sender attached to the
/// edge (its outdegree, a port, or 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViewNode {
    pub label: Label,
    pub children: Vec<(usize, ViewId)>,
}

/// Hash-consing store of views. Equal trees get equal ids.
#[derive(Debug, Default)]
pub struct ViewInterner {
    nodes: Vec<ViewNode>,
    heights: Vec<usize>,
    index: HashMap<ViewNode, ViewId>,
    truncations: HashMap<(ViewId, usize), ViewId>,
}

impl ViewInterner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, label: Label, mut children: Vec<(usize, ViewId)>) -> ViewId {
        children.sort_unstable();
        let node = ViewNode { label, children };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let height = node.children.iter().map(|&(_, c)| self.heights[c.0 as usize] + 1).max().unwrap_or(0);
        let id = ViewId(u32::try_from(self.nodes.len()).expect("fewer than 2^32 views"));
        self.nodes.push(node.clone());
        self.heights.push(height);
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&mut self, label: Label) -> ViewId {
        self.intern(label, Vec::new())
    }

    pub fn node(&self, id: ViewId) -> &ViewNode {
        &self.nodes[id.0 as usize]
    }

    /// Length of the longest root-to-leaf path.
    pub fn height(&self, id: ViewId) -> usize {
        self.heights[id.0 as usize]
    }

    /// The view cut at depth `h`.
    pub fn truncate(&mut self, id: ViewId, h: usize) -> ViewId {
        if self.height(id) <= h {
            return id;
        }
        if let Some(&t) = self.truncations.get(&(id, h)) {
            return t;
        }
        let node = self.node(id).clone();
        let out = if h == 0 {
            self.leaf(node.label)
        } else {
            let children = node.children.iter().map(|&(tag, c)| (tag, self.truncate(c, h - 1))).collect();
            self.intern(node.label, children)
        };
        self.truncations.insert((id, h), out);
        out
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
