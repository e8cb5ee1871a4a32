//! Dinic max-flow over integer capacities.

use std::collections::VecDeque;

pub(crate) const INF: i64 = i64::MAX / 4;

#[derive(Clone, Copy)]
struct Arc {
    to: usize,
    cap: i64,
}

pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            cursor: vec![0; nodes],
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[x] + 1;
                    queue.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, x: usize, t: usize, pushed: i64) -> i64 {
        if x == t {
            return pushed;
        }
        while self.cursor[x] < self.out[x].len() {
            let a = self.out[x][self.cursor[x]];
            let Arc { to, cap } = self.arcs[a];
            if cap > 0 && self.level[to] == self.level[x] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[x] += 1;
        }
        0
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            loop {
                let f = self.dfs(s, t, INF);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
        total
    }

    /// Nodes that can still reach `t` in the residual network.
    pub(crate) fn reaches_sink(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                // The reverse arc a ^ 1 goes from `to` into x.
                let from = self.arcs[a].to;
                if self.arcs[a ^ 1].cap > 0 && !seen[from] {
                    seen[from] = true;
                    queue.push_back(from);
                }
            }
        }
        seen
    }
}
