//! Minimax and alpha-beta search over small alternating MAX/MIN trees whose
//! leaves carry path-radius payoffs.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Candidate arc radii the attacker may approach along.
pub const CANDIDATE_RADII: [f64; 9] = [20.0, 30.0, 40.0, 70.0, 80.0, 100.0, 120.0, 140.0, 160.0];

/// Names of the trees shipped under `fixtures/`.
pub const FIXTURE_NAMES: [&str; 4] = ["main", "ascending", "descending", "single_branch_max"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Max,
    Min,
}

impl LayerKind {
    pub fn flip(self) -> Self {
        match self {
            LayerKind::Max => LayerKind::Min,
            LayerKind::Min => LayerKind::Max,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            LayerKind::Max => "max",
            LayerKind::Min => "min",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeError {
    EmptyTree,
    /// A node is reachable twice, from two parents or through a cycle.
    Shared(String),
    Unreachable(String),
    ValuelessLeaf(String),
    NonFiniteValue(String),
    /// An inner node that also carries a leaf value.
    ValuedInner(String),
    /// Parent and child share a layer kind.
    KindNotAlternating(String),
    DanglingChild(String),
    UnknownFixture(String),
    EmptyCandidates,
    ZeroDepth,
    Parse { line: usize, message: String },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::EmptyTree => write!(f, "tree has no nodes"),
            TreeError::Shared(n) => write!(f, "node {n} is reached more than once (cycle or shared child)"),
            TreeError::Unreachable(n) => write!(f, "node {n} is not reachable from the root"),
            TreeError::ValuelessLeaf(n) => write!(f, "leaf {n} has no value"),
            TreeError::NonFiniteValue(n) => write!(f, "leaf {n} has a non-finite value"),
            TreeError::ValuedInner(n) => write!(f, "inner node {n} also carries a leaf value"),
            TreeError::KindNotAlternating(n) => write!(f, "node {n} has the same layer kind as its parent"),
            TreeError::DanglingChild(n) => write!(f, "node {n} lists a child that does not exist"),
            TreeError::UnknownFixture(n) => write!(f, "unknown fixture {n:?}"),
            TreeError::EmptyCandidates => write!(f, "candidate radius list is empty"),
            TreeError::ZeroDepth => write!(f, "search depth must be at least one ply"),
            TreeError::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl core::error::Error for TreeError {}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub name: String,
    pub kind: LayerKind,
    pub children: Vec<NodeId>,
    pub value: Option<f64>,
    /// Move that leads into this node, e.g. the radius chosen on that edge.
    pub label: Option<f64>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A game tree stored as an arena of nodes.
///
/// Construct through [`GameTree::new`], [`GameTree::parse`] or
/// [`build_fixture`]; all of them validate the tree invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    name: String,
    root: NodeId,
    nodes: Vec<TreeNode>,
}

impl GameTree {
    pub fn new(name: &str, root: NodeId, nodes: Vec<TreeNode>) -> Result<Self, TreeError> {
        let tree = GameTree {
            name: name.to_string(),
            root,
            nodes,
        };
        tree.validate()?;
        Ok(tree)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &TreeNode)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Leaf values in left-to-right order.
    pub fn leaf_values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let node = self.node(id);
            if let Some(v) = node.value {
                out.push(v);
            }
            stack.extend(node.children.iter().rev());
        }
        out
    }

    fn validate(&self) -> Result<(), TreeError> {
        if self.nodes.is_empty() || self.root.0 >= self.nodes.len() {
            return Err(TreeError::EmptyTree);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        seen[self.root.0] = true;
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id.0];
            match (node.children.is_empty(), node.value) {
                (true, None) => return Err(TreeError::ValuelessLeaf(node.name.clone())),
                (true, Some(v)) if !v.is_finite() => {
                    return Err(TreeError::NonFiniteValue(node.name.clone()))
                }
                (false, Some(_)) => return Err(TreeError::ValuedInner(node.name.clone())),
                _ => {}
            }
            for &child in &node.children {
                let Some(c) = self.nodes.get(child.0) else {
                    return Err(TreeError::DanglingChild(node.name.clone()));
                };
                if seen[child.0] {
                    return Err(TreeError::Shared(c.name.clone()));
                }
                if c.kind == node.kind {
                    return Err(TreeError::KindNotAlternating(c.name.clone()));
                }
                seen[child.0] = true;
                stack.push(child);
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(TreeError::Unreachable(self.nodes[i].name.clone()));
        }
        Ok(())
    }

    /// Parses the line format `<id> <max|min> <parent|-> [value]`.
    ///
    /// Blank lines and `#` comments are ignored. Children keep the order in
    /// which their lines appear.
    pub fn parse(name: &str, text: &str) -> Result<Self, TreeError> {
        let mut index: BTreeMap<&str, NodeId> = BTreeMap::new();
        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut root = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| TreeError::Parse {
                line: lineno + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(err("expected 3 or 4 fields"));
            }
            let kind = match fields[1] {
                "max" | "MAX" => LayerKind::Max,
                "min" | "MIN" => LayerKind::Min,
                _ => return Err(err("kind must be max or min")),
            };
            let value = match fields.get(3) {
                Some(v) => Some(v.parse::<f64>().map_err(|_| err("value is not a number"))?),
                None => None,
            };
            let id = NodeId(nodes.len());
            if index.insert(fields[0], id).is_some() {
                return Err(err("duplicate node id"));
            }
            nodes.push(TreeNode {
                name: fields[0].to_string(),
                kind,
                children: Vec::new(),
                value,
                label: value,
            });
            if fields[2] == "-" {
                if root.replace(id).is_some() {
                    return Err(err("second root"));
                }
            } else {
                let parent = *index
                    .get(fields[2])
                    .ok_or_else(|| err("parent must be declared before its children"))?;
                nodes[parent.0].children.push(id);
            }
        }
        let root = root.ok_or(TreeError::EmptyTree)?;
        GameTree::new(name, root, nodes)
    }

    /// Writes the tree in the format read by [`GameTree::parse`].
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let mut stack = vec![(self.root, None::<NodeId>)];
        while let Some((id, parent)) = stack.pop() {
            let node = self.node(id);
            let parent = parent.map_or("-", |p| self.node(p).name.as_str());
            let _ = write!(out, "{} {} {}", node.name, node.kind.as_str(), parent);
            if let Some(v) = node.value {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
            stack.extend(node.children.iter().rev().map(|&c| (c, Some(id))));
        }
        out
    }
}

/// Alpha-beta window; `alpha` is the best lower bound, `beta` the best upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchWindow {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for SearchWindow {
    fn default() -> Self {
        SearchWindow {
            alpha: f64::NEG_INFINITY,
            beta: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    /// Backed-up value of the root.
    pub value: f64,
    /// First root child attaining `value`; `None` when the root is a leaf.
    pub principal_child: Option<NodeId>,
    pub visited: usize,
    /// Subtrees cut off, counted at the child that was not expanded.
    pub pruned: usize,
}

/// Exhaustive minimax. Reference oracle for [`alphabeta_value`].
pub fn minimax_value(tree: &GameTree) -> SearchResult {
    fn walk(tree: &GameTree, id: NodeId, visited: &mut usize) -> f64 {
        *visited += 1;
        let node = tree.node(id);
        if let Some(v) = node.value {
            return v;
        }
        let values = node.children.iter().map(|&c| walk(tree, c, visited));
        match node.kind {
            LayerKind::Max => values.fold(f64::NEG_INFINITY, f64::max),
            LayerKind::Min => values.fold(f64::INFINITY, f64::min),
        }
    }

    let mut visited = 1;
    let root = tree.node(tree.root);
    if let Some(v) = root.value {
        return SearchResult {
            value: v,
            principal_child: None,
            visited,
            pruned: 0,
        };
    }
    let mut best: Option<(f64, NodeId)> = None;
    for &child in &root.children {
        let v = walk(tree, child, &mut visited);
        let better = match best {
            None => true,
            Some((b, _)) => match root.kind {
                LayerKind::Max => v > b,
                LayerKind::Min => v < b,
            },
        };
        if better {
            best = Some((v, child));
        }
    }
    let (value, child) = best.expect("validated inner node has children");
    SearchResult {
        value,
        principal_child: Some(child),
        visited,
        pruned: 0,
    }
}

struct AlphaBeta<'a> {
    tree: &'a GameTree,
    visited: usize,
    pruned: usize,
}

impl AlphaBeta<'_> {
    /// Fail-soft search; returns the value and the index of the best child.
    fn search(&mut self, id: NodeId, mut window: SearchWindow) -> (f64, Option<usize>) {
        debug_assert!(window.alpha <= window.beta);
        self.visited += 1;
        let node = self.tree.node(id);
        if let Some(v) = node.value {
            return (v, None);
        }
        let mut best_idx = None;
        let mut best = match node.kind {
            LayerKind::Max => f64::NEG_INFINITY,
            LayerKind::Min => f64::INFINITY,
        };
        for (i, &child) in node.children.iter().enumerate() {
            let (v, _) = self.search(child, window);
            match node.kind {
                LayerKind::Max => {
                    if best_idx.is_none() || v > best {
                        best = v;
                        best_idx = Some(i);
                    }
                    window.alpha = window.alpha.max(best);
                }
                LayerKind::Min => {
                    if best_idx.is_none() || v < best {
                        best = v;
                        best_idx = Some(i);
                    }
                    window.beta = window.beta.min(best);
                }
            }
            if window.alpha >= window.beta {
                self.pruned += node.children.len() - i - 1;
                break;
            }
        }
        (best, best_idx)
    }
}

/// Alpha-beta search expanding children strictly in stored order.
pub fn alphabeta_value(tree: &GameTree) -> SearchResult {
    let mut ab = AlphaBeta {
        tree,
        visited: 0,
        pruned: 0,
    };
    let (value, best) = ab.search(tree.root, SearchWindow::default());
    SearchResult {
        value,
        principal_child: best.map(|i| tree.node(tree.root).children[i]),
        visited: ab.visited,
        pruned: ab.pruned,
    }
}

/// Loads one of the checked-in trees listed in [`FIXTURE_NAMES`].
pub fn build_fixture(name: &str) -> Result<GameTree, TreeError> {
    let text = fixture_text(name)?;
    GameTree::parse(name, text)
}

/// Raw text of a checked-in fixture.
pub fn fixture_text(name: &str) -> Result<&'static str, TreeError> {
    Ok(match name {
        "main" => include_str!("../fixtures/main.tree"),
        "ascending" => include_str!("../fixtures/ascending.tree"),
        "descending" => include_str!("../fixtures/descending.tree"),
        "single_branch_max" => include_str!("../fixtures/single_branch_max.tree"),
        other => return Err(TreeError::UnknownFixture(other.to_string())),
    })
}

/// Builds the full alternating tree over `candidates` (`depth` plies, one
/// edge per candidate at every node) with leaf values `payoff(path)`, and
/// returns the radius on the edge to the root's principal child.
pub fn choose_radius<F>(
    candidates: &[f64],
    payoff: F,
    depth: usize,
    root_kind: LayerKind,
) -> Result<f64, TreeError>
where
    F: Fn(&[f64]) -> f64,
{
    let tree = radius_tree(candidates, payoff, depth, root_kind)?;
    let result = alphabeta_value(&tree);
    let child = result
        .principal_child
        .expect("depth >= 1 gives the root children");
    Ok(tree.node(child).label.expect("edges are labelled"))
}

/// The tree searched by [`choose_radius`].
pub fn radius_tree<F>(
    candidates: &[f64],
    payoff: F,
    depth: usize,
    root_kind: LayerKind,
) -> Result<GameTree, TreeError>
where
    F: Fn(&[f64]) -> f64,
{
    if candidates.is_empty() {
        return Err(TreeError::EmptyCandidates);
    }
    if depth == 0 {
        return Err(TreeError::ZeroDepth);
    }
    let mut nodes = Vec::new();
    let mut path = Vec::with_capacity(depth);
    expand(&mut nodes, &mut path, candidates, &payoff, depth, root_kind, None);
    GameTree::new("radius", NodeId(0), nodes)
}

fn expand<F: Fn(&[f64]) -> f64>(
    nodes: &mut Vec<TreeNode>,
    path: &mut Vec<f64>,
    candidates: &[f64],
    payoff: &F,
    remaining: usize,
    kind: LayerKind,
    label: Option<f64>,
) -> NodeId {
    let id = NodeId(nodes.len());
    let mut name = String::from("n");
    for (i, r) in path.iter().enumerate() {
        use core::fmt::Write;
        let _ = write!(name, "{}{}", if i == 0 { "" } else { "." }, r);
    }
    nodes.push(TreeNode {
        name,
        kind,
        children: Vec::new(),
        value: if remaining == 0 { Some(payoff(path)) } else { None },
        label,
    });
    if remaining > 0 {
        for &r in candidates {
            path.push(r);
            let child = expand(nodes, path, candidates, payoff, remaining - 1, kind.flip(), Some(r));
            path.pop();
            nodes[id.0].children.push(child);
        }
    }
    id
}
