use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use super::graph::{decompose, ConditionGraph};
use crate::dyadic::DyadicProb;
use crate::error::{Error, Result};
use crate::fib::{fib, lucas};

/// Vertex limit for [`count_covers_general`].
pub const MAX_GENERAL_VERTICES: u32 = 50;

/// Number of vertex covers of a path on `len` vertices that contain every
/// position in `forced`. With nothing forced this is `F_{len+2}`.
pub fn count_covers_path(len: usize, forced: &[usize]) -> Result<BigUint> {
    if let Some(&bad) = forced.iter().find(|&&p| p >= len) {
        return Err(Error::invalid(format!(
            "forced position {bad} outside path of length {len}"
        )));
    }
    if len == 0 {
        return Ok(BigUint::one());
    }
    let mut is_forced = vec![false; len];
    for &p in forced {
        is_forced[p] = true;
    }
    // (covers with last vertex chosen, covers with last vertex not chosen)
    let mut chosen = BigUint::one();
    let mut skipped = if is_forced[0] {
        BigUint::ZERO
    } else {
        BigUint::one()
    };
    for &f in &is_forced[1..] {
        let next_chosen = &chosen + &skipped;
        let next_skipped = if f { BigUint::ZERO } else { chosen };
        chosen = next_chosen;
        skipped = next_skipped;
    }
    Ok(chosen + skipped)
}

/// Exact number of vertex covers containing all forced vertices, for any
/// condition graph with at most [`MAX_GENERAL_VERTICES`] vertices.
///
/// Branches on a maximum-degree vertex, factors over connected components and
/// memoises component counts by vertex mask. Components of maximum degree two
/// are paths or cycles and are counted in closed form.
pub fn count_covers_general(g: &ConditionGraph) -> Result<BigUint> {
    if g.vertex_count() > MAX_GENERAL_VERTICES {
        return Err(Error::capacity(format!(
            "{} vertices exceeds the general cover-counting limit of {MAX_GENERAL_VERTICES}",
            g.vertex_count()
        )));
    }
    let n = g.vertex_count() as usize;
    let mut adj = vec![0u64; n];
    for &(u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let forced: u64 = g.forced().iter().fold(0, |m, &v| m | 1 << v);
    let all: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut counter = CoverCounter {
        adj,
        memo: HashMap::new(),
    };
    // forced vertices are in every cover and satisfy all their edges
    Ok(counter.count(all & !forced))
}

struct CoverCounter {
    adj: Vec<u64>,
    memo: HashMap<u64, BigUint>,
}

impl CoverCounter {
    fn component_of(&self, mask: u64) -> u64 {
        let start = mask & mask.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & mask & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    fn count(&mut self, mask: u64) -> BigUint {
        if mask == 0 {
            return BigUint::one();
        }
        let comp = self.component_of(mask);
        if comp != mask {
            return self.count_component(comp) * self.count(mask & !comp);
        }
        self.count_component(comp)
    }

    fn count_component(&mut self, comp: u64) -> BigUint {
        if let Some(c) = self.memo.get(&comp) {
            return c.clone();
        }
        let size = comp.count_ones();
        let mut best = (0u32, 0usize);
        let mut degree_sum = 0u32;
        let mut rest = comp;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & comp).count_ones();
            degree_sum += d;
            if d > best.0 {
                best = (d, v);
            }
        }
        let result = if size == 1 {
            BigUint::from(2u8)
        } else if best.0 <= 2 {
            if degree_sum / 2 + 1 == size {
                fib(size + 2)
            } else {
                lucas(size)
            }
        } else {
            let v = best.1;
            let without_v = comp & !(1u64 << v);
            let in_cover = self.count(without_v);
            let out_of_cover = self.count(without_v & !self.adj[v]);
            in_cover + out_of_cover
        };
        self.memo.insert(comp, result.clone());
        result
    }
}

/// `P(targets ∉ A + A)` through the condition graph: covers over `2^(N+1)`.
pub fn config_prob(targets: &[u32]) -> Result<DyadicProb> {
    let g = super::build_graph(targets, 0)?;
    // one or two targets always give a forest of paths
    let covers = if g.targets().len() <= 2 {
        count_via_paths(&g)?
    } else {
        count_covers_general(&g)?
    };
    Ok(DyadicProb::new(covers, g.vertex_count()))
}

/// Product of path counts; valid when every component is a path.
pub(crate) fn count_via_paths(g: &ConditionGraph) -> Result<BigUint> {
    let profile = decompose(g);
    let mut total = BigUint::one();
    for c in &profile.components {
        if !c.is_path {
            return Err(Error::Consistency(format!(
                "component containing {} is not a path",
                c.vertices[0]
            )));
        }
        total *= count_covers_path(c.len(), &c.forced_positions)?;
    }
    Ok(total)
}
