//! Tree decompositions: greedy construction from elimination orderings,
//! validation, conversion to nice form and a small text format.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) outside {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    /// Edges `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }
}

/// Elimination heuristic for [`greedy_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Heuristic {
    MinDegree,
    #[default]
    MinFill,
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-degree" => Ok(Heuristic::MinDegree),
            "min-fill" => Ok(Heuristic::MinFill),
            other => Err(Error::usage(format!("unknown heuristic {other:?}"))),
        }
    }
}

/// A rooted tree of vertex bags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex sets, one per tree node.
    pub bags: Vec<Vec<usize>>,
    /// Parent link per node; exactly one node (the root) has none.
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 when every bag is empty).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Checks the parent links form a single rooted tree and bags are sorted
    /// sets. Returns the root and child lists.
    fn structure(&self) -> std::result::Result<(usize, Vec<Vec<usize>>), Violation> {
        let n = self.bags.len();
        if self.parent.len() != n {
            return Err(Violation::NotATree(
                "parent list length differs from bag count".into(),
            ));
        }
        if n == 0 {
            return Err(Violation::NotATree("no nodes".into()));
        }
        for (t, bag) in self.bags.iter().enumerate() {
            if bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Violation::NotATree(format!("bag {t} is not a sorted set")));
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&t| self.parent[t].is_none()).collect();
        if roots.len() != 1 {
            return Err(Violation::NotATree(format!("{} roots", roots.len())));
        }
        let mut children = vec![Vec::new(); n];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Violation::NotATree(format!(
                        "node {t} has unknown parent {p}"
                    )));
                }
                children[p].push(t);
            }
        }
        let root = roots[0];
        let order = preorder(root, &children);
        if order.len() != n {
            return Err(Violation::NotATree("parent links contain a cycle".into()));
        }
        Ok((root, children))
    }
}

fn preorder(root: usize, children: &[Vec<usize>]) -> Vec<usize> {
    let mut order = Vec::with_capacity(children.len());
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        order.push(t);
        stack.extend(children[t].iter().rev().copied());
    }
    order
}

/// First violated tree decomposition property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    UnknownVertex {
        node: usize,
        vertex: usize,
    },
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    /// `vertex` occurs in two bags whose connecting path leaves its subtree.
    Disconnected {
        vertex: usize,
        nodes: (usize, usize),
    },
    Shape {
        node: usize,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(why) => write!(f, "not a tree: {why}"),
            Violation::UnknownVertex { node, vertex } => {
                write!(
                    f,
                    "bag {node} names vertex {vertex}, which is not in the graph"
                )
            }
            Violation::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            Violation::EdgeUncovered(u, v) => write!(f, "edge ({u}, {v}) is in no bag"),
            Violation::Disconnected { vertex, nodes } => write!(
                f,
                "bags containing vertex {vertex} are disconnected (nodes {} and {})",
                nodes.0, nodes.1
            ),
            Violation::Shape { node, reason } => write!(f, "node {node}: {reason}"),
        }
    }
}

/// Checks vertex coverage, edge coverage and connectivity of occurrence sets.
pub fn validate_decomposition(
    td: &TreeDecomposition,
    g: &Graph,
) -> std::result::Result<(), Violation> {
    td.structure()?;
    let n = g.num_vertices();
    let mut tops: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex { node: t, vertex: v });
            }
            let parent_has = td.parent[t].is_some_and(|p| td.bags[p].binary_search(&v).is_ok());
            if !parent_has {
                tops[v].push(t);
            }
        }
    }
    for (v, top) in tops.iter().enumerate() {
        match top.len() {
            0 => return Err(Violation::VertexUncovered(v)),
            1 => {}
            _ => {
                return Err(Violation::Disconnected {
                    vertex: v,
                    nodes: (top[0], top[1]),
                })
            }
        }
    }
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for bag in &td.bags {
        for (i, &u) in bag.iter().enumerate() {
            for &v in &bag[i + 1..] {
                if g.has_edge(u, v) {
                    covered.insert((u, v));
                }
            }
        }
    }
    if let Some((u, v)) = g.edges().find(|e| !covered.contains(e)) {
        return Err(Violation::EdgeUncovered(u, v));
    }
    Ok(())
}

/// Tree decomposition from a greedy elimination ordering.
///
/// Each eliminated vertex `v` contributes the bag `{v} ∪ N(v)` taken at
/// elimination time; its parent is the bag of the neighbour eliminated next.
pub fn greedy_decomposition(g: &Graph, heuristic: Heuristic) -> TreeDecomposition {
    let n = g.num_vertices();
    if n == 0 {
        return TreeDecomposition {
            bags: vec![Vec::new()],
            parent: vec![None],
        };
    }
    let mut adj = g.adj.clone();
    let key = |adj: &[BTreeSet<usize>], v: usize| -> (usize, usize) {
        let deg = adj[v].len();
        match heuristic {
            Heuristic::MinDegree => (deg, 0),
            Heuristic::MinFill => {
                let nb: Vec<usize> = adj[v].iter().copied().collect();
                let mut fill = 0;
                for (i, &a) in nb.iter().enumerate() {
                    for &b in &nb[i + 1..] {
                        if !adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                (fill, deg)
            }
        }
    };
    let mut keys: Vec<(usize, usize)> = (0..n).map(|v| key(&adj, v)).collect();
    let mut queue: BTreeSet<((usize, usize), usize)> = (0..n).map(|v| (keys[v], v)).collect();

    let mut position = vec![usize::MAX; n];
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        position[v] = order.len();
        order.push(v);
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
        for &a in &nb {
            adj[a].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<usize> = nb.iter().copied().collect();
        if heuristic == Heuristic::MinFill {
            for &a in &nb {
                touched.extend(adj[a].iter().copied());
            }
        }
        for w in touched {
            if position[w] != usize::MAX {
                continue;
            }
            let k = key(&adj, w);
            if k != keys[w] {
                queue.remove(&(keys[w], w));
                keys[w] = k;
                queue.insert((k, w));
            }
        }
    }

    // node index = elimination position
    let mut parent = vec![None; n];
    let mut node_bags = vec![Vec::new(); n];
    let mut component_roots = Vec::new();
    for (pos, &v) in order.iter().enumerate() {
        let next = bags[v]
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| position[u])
            .min();
        match next {
            Some(p) => parent[pos] = Some(p),
            None => component_roots.push(pos),
        }
        node_bags[pos] = std::mem::take(&mut bags[v]);
    }
    // Join components under the last root; their vertex sets are disjoint.
    let root = *component_roots.last().expect("at least one component");
    for &r in &component_roots {
        if r != root {
            parent[r] = Some(root);
        }
    }
    TreeDecomposition {
        bags: node_bags,
        parent,
    }
}

/// Node type of a nice tree decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Rooted decomposition whose root bag is empty and whose nodes are all
/// leaves, introduces, forgets or binary joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids with every child before its parent. Fails on a broken tree.
    pub fn postorder(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        if self.root >= n {
            return Err(Error::usage("root index out of range"));
        }
        let children: Vec<Vec<usize>> = self.nodes.iter().map(|x| x.children.clone()).collect();
        if children.iter().flatten().any(|&c| c >= n) {
            return Err(Error::usage("child index out of range"));
        }
        let mut order = preorder(self.root, &children);
        if order.len() != n || {
            let mut seen = vec![false; n];
            order.iter().any(|&t| std::mem::replace(&mut seen[t], true))
        } {
            return Err(Error::usage("nice decomposition is not a tree"));
        }
        order.reverse();
        Ok(order)
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut parent = vec![None; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(t);
            }
        }
        TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            parent,
        }
    }

    /// Checks the shape rules of every node kind, without a graph.
    pub fn check_shape(&self) -> std::result::Result<(), Violation> {
        let shape = |node: usize, reason: &str| Violation::Shape {
            node,
            reason: reason.to_string(),
        };
        let td = self.to_tree_decomposition();
        let (root, _) = td.structure()?;
        if root != self.root {
            return Err(Violation::NotATree("declared root has a parent".into()));
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err(shape(self.root, "root bag is not empty"));
        }
        for (t, node) in self.nodes.iter().enumerate() {
            let kids: Vec<&NiceNode> = node.children.iter().map(|&c| &self.nodes[c]).collect();
            match node.kind {
                NodeKind::Leaf => {
                    if !kids.is_empty() || !node.bag.is_empty() {
                        return Err(shape(t, "leaf must have no children and an empty bag"));
                    }
                }
                NodeKind::Introduce(v) => {
                    if kids.len() != 1 {
                        return Err(shape(t, "introduce node needs exactly one child"));
                    }
                    let child = &kids[0].bag;
                    if child.binary_search(&v).is_ok()
                        || node.bag.binary_search(&v).is_err()
                        || node.bag.len() != child.len() + 1
                        || !child.iter().all(|x| node.bag.binary_search(x).is_ok())
                    {
                        return Err(shape(t, &format!("bag is not child bag plus {v}")));
                    }
                }
                NodeKind::Forget(v) => {
                    if kids.len() != 1 {
                        return Err(shape(t, "forget node needs exactly one child"));
                    }
                    let child = &kids[0].bag;
                    if node.bag.binary_search(&v).is_ok()
                        || child.binary_search(&v).is_err()
                        || node.bag.len() + 1 != child.len()
                        || !node.bag.iter().all(|x| child.binary_search(x).is_ok())
                    {
                        return Err(shape(t, &format!("bag is not child bag minus {v}")));
                    }
                }
                NodeKind::Join => {
                    if kids.len() != 2 {
                        return Err(shape(t, "join node needs exactly two children"));
                    }
                    if kids.iter().any(|k| k.bag != node.bag) {
                        return Err(shape(t, "join children bags differ from the join bag"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Full validation of a nice decomposition against a graph.
pub fn validate_nice(ntd: &NiceTreeDecomposition, g: &Graph) -> std::result::Result<(), Violation> {
    ntd.check_shape()?;
    validate_decomposition(&ntd.to_tree_decomposition(), g)
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            bag,
            kind,
            children,
        });
        self.nodes.len() - 1
    }

    /// Walks from node `from` to a node with bag `target`: forgets first, then
    /// introduces, each in increasing vertex order.
    fn morph(&mut self, mut from: usize, target: &[usize]) -> usize {
        let current = self.nodes[from].bag.clone();
        for &v in current.iter().filter(|v| target.binary_search(v).is_err()) {
            let bag: Vec<usize> = self.nodes[from]
                .bag
                .iter()
                .copied()
                .filter(|&x| x != v)
                .collect();
            from = self.push(bag, NodeKind::Forget(v), vec![from]);
        }
        for &v in target.iter().filter(|v| current.binary_search(v).is_err()) {
            let mut bag = self.nodes[from].bag.clone();
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            from = self.push(bag, NodeKind::Introduce(v), vec![from]);
        }
        from
    }
}

/// Converts a tree decomposition into a nice one of no larger width.
///
/// Nodes are emitted children-first, so the root is the last node.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let (root, children) = td
        .structure()
        .map_err(|v| Error::usage(format!("invalid tree decomposition: {v}")))?;
    let mut post = preorder(root, &children);
    post.reverse();

    let mut b = NiceBuilder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.len()];
    for &t in &post {
        let bag = &td.bags[t];
        let mut tops = children[t].iter().map(|&c| b.morph(top[c], bag));
        let node = match tops.next() {
            None => {
                let leaf = b.push(Vec::new(), NodeKind::Leaf, Vec::new());
                b.morph(leaf, bag)
            }
            Some(first) => {
                let rest: Vec<usize> = tops.collect();
                rest.into_iter().fold(first, |acc, next| {
                    b.push(bag.clone(), NodeKind::Join, vec![acc, next])
                })
            }
        };
        top[t] = node;
    }
    let root_node = b.morph(top[root], &[]);
    Ok(NiceTreeDecomposition {
        nodes: b.nodes,
        root: root_node,
    })
}

/// A decomposition file holds either a plain or a nice decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionFile {
    Plain(TreeDecomposition),
    Nice(NiceTreeDecomposition),
}

impl DecompositionFile {
    /// Nice form, converting plain decompositions on the way.
    pub fn into_nice(self) -> Result<NiceTreeDecomposition> {
        match self {
            DecompositionFile::Plain(td) => make_nice(&td),
            DecompositionFile::Nice(n) => Ok(n),
        }
    }
}

pub fn write_decomposition(td: &TreeDecomposition) -> String {
    let mut out = format!("td {} {}\n", td.len(), td.width());
    for (t, bag) in td.bags.iter().enumerate() {
        out.push_str(&bag_line(t, bag));
    }
    for (t, p) in td.parent.iter().enumerate() {
        if let Some(p) = p {
            out.push_str(&format!("e {p} {t}\n"));
        }
    }
    out
}

pub fn write_nice(ntd: &NiceTreeDecomposition) -> String {
    let mut out = format!("td {} {}\n", ntd.len(), ntd.width());
    for (t, node) in ntd.nodes.iter().enumerate() {
        out.push_str(&bag_line(t, &node.bag));
    }
    for (t, node) in ntd.nodes.iter().enumerate() {
        for &c in &node.children {
            out.push_str(&format!("e {t} {c}\n"));
        }
    }
    for (t, node) in ntd.nodes.iter().enumerate() {
        let kind = match node.kind {
            NodeKind::Leaf => "leaf".to_string(),
            NodeKind::Introduce(v) => format!("introduce {v}"),
            NodeKind::Forget(v) => format!("forget {v}"),
            NodeKind::Join => "join".to_string(),
        };
        out.push_str(&format!("k {t} {kind}\n"));
    }
    out
}

fn bag_line(t: usize, bag: &[usize]) -> String {
    let mut line = format!("b {t}");
    for v in bag {
        line.push_str(&format!(" {v}"));
    }
    line.push('\n');
    line
}

/// Parses the `td` / `b` / `e` / `k` line format. Files with `k` lines are
/// nice decompositions.
pub fn parse_decomposition(text: &str) -> Result<DecompositionFile> {
    let num = |tok: Option<&str>, line: usize| -> Result<usize> {
        tok.ok_or_else(|| Error::input(format!("line {line}: missing field")))?
            .parse()
            .map_err(|_| Error::input(format!("line {line}: expected a non-negative integer")))
    };
    let mut n_nodes = None;
    let mut bags: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut edges = Vec::new();
    let mut kinds: HashMap<usize, NodeKind> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("td") => {
                n_nodes = Some(num(tok.next(), lineno)?);
                // declared width is informational
            }
            Some("b") => {
                let t = num(tok.next(), lineno)?;
                let mut bag = tok
                    .map(|v| num(Some(v), lineno))
                    .collect::<Result<Vec<usize>>>()?;
                bag.sort_unstable();
                bag.dedup();
                if bags.insert(t, bag).is_some() {
                    return Err(Error::input(format!("line {lineno}: bag {t} given twice")));
                }
            }
            Some("e") => {
                let p = num(tok.next(), lineno)?;
                let c = num(tok.next(), lineno)?;
                edges.push((p, c));
            }
            Some("k") => {
                let t = num(tok.next(), lineno)?;
                let kind = match tok.next() {
                    Some("leaf") => NodeKind::Leaf,
                    Some("join") => NodeKind::Join,
                    Some("introduce") => NodeKind::Introduce(num(tok.next(), lineno)?),
                    Some("forget") => NodeKind::Forget(num(tok.next(), lineno)?),
                    other => {
                        return Err(Error::input(format!(
                            "line {lineno}: unknown node kind {other:?}"
                        )))
                    }
                };
                kinds.insert(t, kind);
            }
            Some(other) => {
                return Err(Error::input(format!(
                    "line {lineno}: unknown record {other:?}"
                )))
            }
            None => {}
        }
    }
    let n = n_nodes.ok_or_else(|| Error::input("missing `td` header"))?;
    let mut node_bags = vec![Vec::new(); n];
    for (t, bag) in bags {
        if t >= n {
            return Err(Error::input(format!(
                "bag for node {t} beyond declared {n} nodes"
            )));
        }
        node_bags[t] = bag;
    }
    let mut parent = vec![None; n];
    let mut children = vec![Vec::new(); n];
    for (p, c) in edges {
        if p >= n || c >= n {
            return Err(Error::input(format!(
                "tree edge ({p}, {c}) outside {n} nodes"
            )));
        }
        if parent[c].replace(p).is_some() {
            return Err(Error::input(format!("node {c} has two parents")));
        }
        children[p].push(c);
    }
    let td = TreeDecomposition {
        bags: node_bags,
        parent,
    };
    if kinds.is_empty() {
        return Ok(DecompositionFile::Plain(td));
    }
    let (root, _) = td
        .structure()
        .map_err(|v| Error::input(format!("decomposition file: {v}")))?;
    let nodes = (0..n)
        .map(|t| {
            Ok(NiceNode {
                bag: td.bags[t].clone(),
                kind: *kinds
                    .get(&t)
                    .ok_or_else(|| Error::input(format!("node {t} has no kind")))?,
                children: children[t].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionFile::Nice(NiceTreeDecomposition {
        nodes,
        root,
    }))
}
