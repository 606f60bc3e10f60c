use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionGraph {
    max_label: u32,
    targets: Vec<u32>,
    /// Pairs `(u, v)` with `u < v` and `u + v` a target, sorted.
    edges: Vec<(u32, u32)>,
    /// Vertices `u` with `2u` a target, sorted.
    forced: Vec<u32>,
}

/// Builds the condition graph for the targets `k_shift + a` over vertices `[0, max target]`.
pub fn build_graph(targets: &[u32], k_shift: u32) -> Result<ConditionGraph> {
    let mut shifted: Vec<u32> = targets
        .iter()
        .map(|&a| {
            a.checked_add(k_shift)
                .ok_or_else(|| Error::invalid("shifted target overflows"))
        })
        .collect::<Result<_>>()?;
    shifted.sort_unstable();
    shifted.dedup();
    let max_label = *shifted
        .last()
        .ok_or_else(|| Error::invalid("empty target list"))?;
    let mut edges = Vec::new();
    let mut forced = Vec::new();
    for &t in &shifted {
        for u in 0..=t / 2 {
            let v = t - u;
            if u == v {
                forced.push(u);
            } else {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    forced.sort_unstable();
    forced.dedup();
    Ok(ConditionGraph {
        max_label,
        targets: shifted,
        edges,
        forced,
    })
}

impl ConditionGraph {
    pub fn max_label(&self) -> u32 {
        self.max_label
    }

    pub fn vertex_count(&self) -> u32 {
        self.max_label + 1
    }

    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn forced(&self) -> &[u32] {
        &self.forced
    }

    pub fn is_forced(&self, v: u32) -> bool {
        self.forced.binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertex_count() as usize];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }
}

/// One connected component. For a path, `vertices` is in walk order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<u32>,
    /// Indices into `vertices` of forced vertices.
    pub forced_positions: Vec<usize>,
    pub is_path: bool,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentProfile {
    pub components: Vec<Component>,
}

impl ComponentProfile {
    pub fn all_paths(&self) -> bool {
        self.components.iter().all(|c| c.is_path)
    }

    /// Multiset of component sizes, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let mut l: Vec<_> = self.components.iter().map(Component::len).collect();
        l.sort_unstable();
        l
    }
}

/// Splits the graph into connected components, ordering each path from the
/// endpoint with the larger label. Components are listed by smallest vertex.
pub fn decompose(g: &ConditionGraph) -> ComponentProfile {
    let adj = g.adjacency();
    let n = adj.len();
    let mut comp_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<u32>> = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut stack = vec![start as u32];
        comp_of[start] = id;
        let mut verts = Vec::new();
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &w in &adj[v as usize] {
                if comp_of[w as usize] == usize::MAX {
                    comp_of[w as usize] = id;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        members.push(verts);
    }

    let components = members
        .into_iter()
        .map(|verts| {
            let edge_count: usize = verts.iter().map(|&v| adj[v as usize].len()).sum::<usize>() / 2;
            let is_path =
                edge_count + 1 == verts.len() && verts.iter().all(|&v| adj[v as usize].len() <= 2);
            let ordered = if is_path {
                walk_path(&adj, &verts)
            } else {
                verts
            };
            let forced_positions = ordered
                .iter()
                .enumerate()
                .filter(|(_, &v)| g.is_forced(v))
                .map(|(i, _)| i)
                .collect();
            Component {
                vertices: ordered,
                forced_positions,
                is_path,
            }
        })
        .collect();
    ComponentProfile { components }
}

fn walk_path(adj: &[Vec<u32>], verts: &[u32]) -> Vec<u32> {
    let start = verts
        .iter()
        .copied()
        .filter(|&v| adj[v as usize].len() <= 1)
        .max()
        .expect("a path has an endpoint");
    let mut order = Vec::with_capacity(verts.len());
    let mut prev = u32::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        match adj[cur as usize].iter().copied().find(|&w| w != prev) {
            Some(next) if order.len() < verts.len() => {
                prev = cur;
                cur = next;
            }
            _ => break,
        }
    }
    order
}
