//! Small deterministic Dinic max-flow, used by the densest-subgraph oracle.

pub struct Dinic {
    n: usize,
    // arcs stored as (to, cap); reverse arc is i^1
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(n: usize) -> Dinic {
        Dinic {
            n,
            to: Vec::new(),
            cap: Vec::new(),
            head: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.to.push(u);
        self.cap.push(0);
        self.head[u].push(id);
        self.head[v].push(id + 1);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = std::collections::VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &id in &self.head[v] {
                let w = self.to[id];
                if self.cap[id] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.head[v].len() {
            let id = self.head[v][self.iter[v]];
            let w = self.to[id];
            if self.cap[id] > 0 && self.level[w] == self.level[v] + 1 {
                let d = self.dfs(w, t, f.min(self.cap[id]));
                if d > 0 {
                    self.cap[id] -= d;
                    self.cap[id ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0i64;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Source side of a minimum cut (run after `max_flow`).
    pub fn min_cut_side(&self, s: usize) -> Vec<bool> {
        let mut side = vec![false; self.n];
        let mut queue = std::collections::VecDeque::new();
        side[s] = true;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for &id in &self.head[v] {
                let w = self.to[id];
                if self.cap[id] > 0 && !side[w] {
                    side[w] = true;
                    queue.push_back(w);
                }
            }
        }
        side
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_flow() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 3);
        d.add_edge(0, 2, 2);
        d.add_edge(1, 2, 1);
        d.add_edge(1, 3, 2);
        d.add_edge(2, 3, 3);
        assert_eq!(d.max_flow(0, 3), 5);
    }

    #[test]
    fn cut_side_is_source_component() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 1);
        d.add_edge(1, 2, 1);
        d.add_edge(2, 3, 5);
        d.max_flow(0, 3);
        let side = d.min_cut_side(0);
        assert!(side[0]);
        assert!(!side[3]);
    }
}
