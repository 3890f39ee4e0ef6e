use std::collections::VecDeque;

/// Dinic's algorithm on an arc-list residual network.
#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds arc `from → to` with capacity `cap`; returns its id.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        id
    }

    /// Flow currently routed on arc `id` (its reverse arc's residual).
    pub(crate) fn flow(&self, id: usize) -> u64 {
        self.cap[id ^ 1]
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    // Iterative blocking-flow search: finds one augmenting path in the level
    // graph and pushes its bottleneck.
    fn dfs(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let bottleneck = path.iter().map(|&id| self.cap[id]).min().unwrap_or(limit).min(limit);
                for &id in &path {
                    self.cap[id] -= bottleneck;
                    self.cap[id ^ 1] += bottleneck;
                }
                return bottleneck;
            }
            let mut advanced = false;
            while self.iter[u] < self.adj[u].len() {
                let id = self.adj[u][self.iter[u]];
                let v = self.to[id];
                if self.cap[id] > 0 && self.level[v] == self.level[u] + 1 {
                    path.push(id);
                    u = v;
                    advanced = true;
                    break;
                }
                self.iter[u] += 1;
            }
            if !advanced {
                // Dead end: prune u and retreat.
                self.level[u] = -1;
                match path.pop() {
                    Some(id) => {
                        u = self.to[id ^ 1];
                        self.iter[u] += 1;
                    }
                    None => return 0,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        // CLRS figure 26.1: max flow 23.
        let mut net = FlowNetwork::new(6);
        for (a, b, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            net.add_arc(a, b, c);
        }
        assert_eq!(net.max_flow(0, 5), 23);
    }

    #[test]
    fn disconnected_sink() {
        let mut net = FlowNetwork::new(3);
        let a = net.add_arc(0, 1, 5);
        assert_eq!(net.max_flow(0, 2), 0);
        assert_eq!(net.flow(a), 0);
    }
}
