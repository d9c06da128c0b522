//! Maximum clique by branch and bound with greedy-coloring bounds.

use crate::bits::Bits;
use crate::error::{Error, Result};

struct Search<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

/// A maximum clique inside `cand`; `adj[v]` must not contain `v`.
///
/// Ties are broken deterministically. Fails with `CapExceeded` after
/// `budget` search nodes.
pub(crate) fn max_clique(adj: &[Bits], cand: &Bits, budget: u64) -> Result<Vec<usize>> {
    let mut s = Search { adj, best: Vec::new(), nodes: 0, budget };
    let mut r = Vec::new();
    s.expand(&mut r, cand.clone())?;
    let mut best = s.best;
    best.sort_unstable();
    Ok(best)
}

impl Search<'_> {
    fn expand(&mut self, r: &mut Vec<usize>, mut p: Bits) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CapExceeded { required: self.nodes as u128, cap: self.budget as u128 });
        }
        if p.is_empty() {
            if r.len() > self.best.len() {
                self.best = r.clone();
            }
            return Ok(());
        }
        let (order, colors) = self.color(&p);
        for i in (0..order.len()).rev() {
            if r.len() + colors[i] <= self.best.len() {
                return Ok(());
            }
            let v = order[i];
            r.push(v);
            let np = p.and(&self.adj[v]);
            self.expand(r, np)?;
            r.pop();
            p.unset(v);
        }
        Ok(())
    }

    /// Greedy sequential coloring; `colors[i]` bounds the clique size among `order[..=i]`.
    fn color(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(p.count());
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = p.clone();
        let mut k = 0;
        while !uncolored.is_empty() {
            k += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first_one() {
                uncolored.unset(v);
                class.unset(v);
                class = class.and_not(&self.adj[v]);
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }
}
