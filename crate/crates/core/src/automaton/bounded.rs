//! Boundedness: the cycles through active states are pairwise disjoint and
//! no directed path joins two of them.
//!
//! Equivalently, after deleting the trivial states every strongly connected
//! component is either acyclic or a single simple cycle, and no cycle
//! component reaches another one.

use std::collections::VecDeque;
use std::fmt;

use super::MooreAutomaton;

/// A closed walk: `states[k]` reads `inputs[k]` and moves to
/// `states[(k + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub states: Vec<String>,
    pub inputs: Vec<u8>,
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, i) in self.states.iter().zip(&self.inputs) {
            write!(f, "{s} -{i}-> ")?;
        }
        write!(f, "{}", self.states[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnboundedWitness {
    /// Two different cycles sharing a state.
    IntersectingCycles(Cycle, Cycle),
    /// A path of states from a state on the first cycle to a state on the second.
    ConnectingPath { from: Cycle, to: Cycle, path: Vec<String> },
}

impl fmt::Display for UnboundedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnboundedWitness::IntersectingCycles(c1, c2) => write!(f, "cycles {c1} and {c2} intersect"),
            UnboundedWitness::ConnectingPath { from, to, path } => {
                write!(f, "path {} joins cycle {from} to cycle {to}", path.join(" -> "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundednessReport {
    pub bounded: bool,
    /// Nontrivial cycles found, one per cycle component, plus the witness
    /// cycles when a component is not a simple cycle.
    pub cycles: Vec<Cycle>,
    pub witness: Option<UnboundedWitness>,
}

impl fmt::Display for BoundednessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.bounded { "bounded" } else { "unbounded" })?;
        for c in &self.cycles {
            writeln!(f, "cycle: {c}")?;
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {w}")?;
        }
        Ok(())
    }
}

/// Internal edge list of the active part: `(from, input, to)`.
struct ActiveGraph {
    active: Vec<bool>,
    out: Vec<Vec<(u8, usize)>>,
}

impl ActiveGraph {
    fn new(m: &MooreAutomaton) -> Self {
        let n = m.len();
        let mut active = vec![true; n];
        for t in m.trivial_states() {
            active[t] = false;
        }
        let out = (0..n)
            .map(|s| {
                if !active[s] {
                    return Vec::new();
                }
                m.states()[s].next.iter().enumerate().filter(|(_, &t)| active[t]).map(|(i, &t)| (i as u8, t)).collect()
            })
            .collect();
        ActiveGraph { active, out }
    }

    /// Tarjan's algorithm; components come out in reverse topological order.
    fn components(&self) -> Vec<Vec<usize>> {
        struct Tarjan<'a> {
            g: &'a ActiveGraph,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            out: Vec<Vec<usize>>,
        }
        impl Tarjan<'_> {
            fn visit(&mut self, v: usize) {
                self.index[v] = Some(self.next);
                self.low[v] = self.next;
                self.next += 1;
                self.stack.push(v);
                self.on_stack[v] = true;
                for &(_, w) in &self.g.out[v] {
                    match self.index[w] {
                        None => {
                            self.visit(w);
                            self.low[v] = self.low[v].min(self.low[w]);
                        }
                        Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                        _ => {}
                    }
                }
                if Some(self.low[v]) == self.index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = self.stack.pop().expect("nonempty stack");
                        self.on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    self.out.push(comp);
                }
            }
        }
        let n = self.out.len();
        let mut t = Tarjan {
            g: self,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..n {
            if self.active[v] && t.index[v].is_none() {
                t.visit(v);
            }
        }
        t.out
    }

    /// Shortest path of states from `from` to `to` staying inside `allowed`,
    /// as `(state, input taken)` pairs ending before `to`.
    fn path(&self, from: usize, to: usize, allowed: &dyn Fn(usize) -> bool) -> Option<Vec<(usize, u8)>> {
        let n = self.out.len();
        let mut prev: Vec<Option<(usize, u8)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut steps = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, i) = prev[cur].expect("path predecessor");
                    steps.push((p, i));
                    cur = p;
                }
                steps.reverse();
                return Some(steps);
            }
            for &(i, w) in &self.out[v] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    prev[w] = Some((v, i));
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

fn cycle_from(m: &MooreAutomaton, steps: &[(usize, u8)]) -> Cycle {
    Cycle {
        states: steps.iter().map(|&(s, _)| m.states()[s].name.clone()).collect(),
        inputs: steps.iter().map(|&(_, i)| i).collect(),
    }
}

pub fn is_bounded(m: &MooreAutomaton) -> BoundednessReport {
    let g = ActiveGraph::new(m);
    let mut components = g.components();
    components.reverse();
    let n = m.len();
    let mut comp_of = vec![usize::MAX; n];
    for (k, c) in components.iter().enumerate() {
        for &v in c {
            comp_of[v] = k;
        }
    }
    let mut cycles = Vec::new();
    let mut cycle_comps: Vec<(usize, Cycle)> = Vec::new();
    let mut witness = None;
    for (k, comp) in components.iter().enumerate() {
        let internal = |v: usize| g.out[v].iter().filter(|&&(_, w)| comp_of[w] == k).count();
        let edges: usize = comp.iter().map(|&v| internal(v)).sum();
        if edges == 0 {
            continue;
        }
        let in_comp = |w: usize| comp_of[w] == k;
        if edges > comp.len() {
            // some state has two internal out-edges; close a cycle along each
            let u = *comp.iter().find(|&&v| internal(v) >= 2).expect("edge surplus");
            let mut two = g.out[u].iter().filter(|&&(_, w)| comp_of[w] == k).map(|&(i, w)| {
                let mut steps = vec![(u, i)];
                steps.extend(g.path(w, u, &in_comp).expect("strongly connected"));
                cycle_from(m, &steps)
            });
            let (c1, c2) = (two.next().expect("first edge"), two.next().expect("second edge"));
            cycles.push(c1.clone());
            cycles.push(c2.clone());
            if witness.is_none() {
                witness = Some(UnboundedWitness::IntersectingCycles(c1, c2));
            }
            continue;
        }
        // a simple cycle: every state has exactly one internal out-edge
        let start = comp[0];
        let mut steps = Vec::new();
        let mut v = start;
        loop {
            let &(i, w) = g.out[v].iter().find(|&&(_, w)| comp_of[w] == k).expect("cycle edge");
            steps.push((v, i));
            v = w;
            if v == start {
                break;
            }
        }
        let c = cycle_from(m, &steps);
        cycles.push(c.clone());
        cycle_comps.push((k, c));
    }
    if witness.is_none() {
        'outer: for (k, from) in &cycle_comps {
            for (l, to) in &cycle_comps {
                if k == l {
                    continue;
                }
                let src = components[*k][0];
                let dst = components[*l][0];
                if let Some(steps) = g.path(src, dst, &|_| true) {
                    let mut path: Vec<String> = steps.iter().map(|&(s, _)| m.states()[s].name.clone()).collect();
                    path.push(m.states()[dst].name.clone());
                    witness = Some(UnboundedWitness::ConnectingPath { from: from.clone(), to: to.clone(), path });
                    break 'outer;
                }
            }
        }
    }
    BoundednessReport { bounded: witness.is_none(), cycles, witness }
}
