use std::collections::{BTreeMap, BTreeSet};

use super::views::{Label, ViewId, ViewInterner};
use crate::graph::{DirectedMultigraph, Edge};

/// A base read off a single view tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedBase {
    /// Base graph, colored with the edge tags when they are ports.
    pub graph: DirectedMultigraph,
    pub labels: Vec<Label>,
    /// Outdegree of each class, when the tags are outdegrees.
    pub outdegrees: Option<Vec<usize>>,
    /// Class of the view's owner.
    pub root: usize,
    /// Truncation depth that identified the classes.
    pub depth: usize,
}

/// Whether edge tags carry the sender's outdegree or an output port.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tags {
    Plain,
    Outdegree,
    Port,
}

type Key = (usize, ViewId);

/// Rebuild the minimum base from a view of height `T`.
///
/// Nodes at depth `d` of the tree are identified by their view cut at depth
/// `h` (plus the outdegree when tags carry it). The largest `h` for which
/// every key seen at depth `<= T-h` is represented at depth `<= T-h-1`, and
/// all representatives of a key agree one level deeper, gives the classes;
/// each class takes the in-edges of a representative. Returns `None` when
/// no depth passes, in particular for a bare leaf. Once `T >= n + D` the result is the minimum base.
pub fn reconstruct_base(views: &mut ViewInterner, root: ViewId, root_tag: usize, tags: Tags) -> Option<ReconstructedBase> {
    let part = |tag: usize| if tags == Tags::Outdegree { tag } else { 0 };
    let t = views.height(root);
    if t == 0 {
        return None;
    }

    let mut levels: Vec<BTreeSet<(usize, ViewId)>> = vec![BTreeSet::from([(root_tag, root)])];
    for d in 0..t {
        let next = levels[d].iter().flat_map(|&(_, v)| views.node(v).children.clone()).collect();
        levels.push(next);
    }

    'depth: for h in (0..t).rev() {
        // key -> view cut at h + 1, over representatives at depth <= t-h-1
        let mut reps: BTreeMap<Key, ViewId> = BTreeMap::new();
        for level in &levels[..t - h] {
            for &(tag, v) in level {
                let key = (part(tag), views.truncate(v, h));
                let deeper = views.truncate(v, h + 1);
                if *reps.entry(key).or_insert(deeper) != deeper {
                    continue 'depth;
                }
            }
        }
        for &(tag, v) in &levels[t - h] {
            if !reps.contains_key(&(part(tag), views.truncate(v, h))) {
                continue 'depth;
            }
        }

        let mut keys: Vec<Key> = reps.keys().copied().collect();
        keys.sort_by(|a, b| (&views.node(a.1).label, a).cmp(&(&views.node(b.1).label, b)));
        let class: BTreeMap<Key, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut edges = Vec::new();
        let mut colors = Vec::new();
        for (c, key) in keys.iter().enumerate() {
            for &(tag, child) in &views.node(reps[key]).children {
                edges.push(Edge::new(*class.get(&(part(tag), child))?, c));
                colors.push(tag);
            }
        }
        let mut graph = DirectedMultigraph::new(keys.len(), edges).ok()?;
        if tags == Tags::Port {
            graph = graph.with_colors(colors).ok()?;
        }
        let root_key = (part(root_tag), views.truncate(root, h));
        return Some(ReconstructedBase {
            graph,
            labels: keys.iter().map(|k| views.node(k.1).label.clone()).collect(),
            outdegrees: (tags == Tags::Outdegree).then(|| keys.iter().map(|k| k.0).collect()),
            root: class[&root_key],
            depth: h,
        });
    }
    None
}

/// The one-vertex base of an agent that has run rounds without receiving
/// anything.
pub fn isolated_base(views: &ViewInterner, root: ViewId, root_tag: usize, tags: Tags) -> ReconstructedBase {
    let mut graph = DirectedMultigraph::new(1, Vec::new()).expect("no edges");
    if tags == Tags::Port {
        graph = graph.with_colors(Vec::new()).expect("no edges");
    }
    ReconstructedBase {
        graph,
        labels: vec![views.node(root).label.clone()],
        outdegrees: (tags == Tags::Outdegree).then(|| vec![root_tag]),
        root: 0,
        depth: 0,
    }
}
