use crate::error::{invalid, Error, Result};
use crate::exact::tiny_instance;
use crate::model::EmbeddedGraph;
use crate::scalar::Scalar;
use crate::tour::{cycle_length, Tour};

pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Exhaustive minimum over every cyclic order that uses present edges.
///
/// Vertex 0 is pinned first and each cycle is counted in one orientation
/// only (`order[1] < order[n−1]`), giving the `(n−1)!/2` distinct cycles.
pub fn brute_force_tour<S: Scalar>(graph: &EmbeddedGraph<S>) -> Result<Option<Tour<S>>> {
    let n = graph.len();
    if n == 0 {
        return Err(invalid("exact solver needs at least one vertex"));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge { n, cap: BRUTE_FORCE_LIMIT });
    }
    if let Some(tiny) = tiny_instance(graph) {
        return Ok(tiny);
    }
    let mut search = Search { graph, n, order: vec![0], used: vec![false; n], best: None };
    search.used[0] = true;
    search.extend();
    Ok(search.best.map(|(order, _)| Tour::new_unchecked(graph, order)))
}

struct Search<'a, S> {
    graph: &'a EmbeddedGraph<S>,
    n: usize,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(Vec<usize>, S)>,
}

impl<S: Scalar> Search<'_, S> {
    fn extend(&mut self) {
        let last = *self.order.last().expect("nonempty");
        if self.order.len() == self.n {
            if self.order[1] < last && self.graph.has_edge(last, 0) {
                let length = cycle_length(self.graph, &self.order);
                if self.best.as_ref().is_none_or(|(_, b)| length < *b) {
                    self.best = Some((self.order.clone(), length));
                }
            }
            return;
        }
        for v in 1..self.n {
            if !self.used[v] && self.graph.has_edge(last, v) {
                self.used[v] = true;
                self.order.push(v);
                self.extend();
                self.order.pop();
                self.used[v] = false;
            }
        }
    }
}
