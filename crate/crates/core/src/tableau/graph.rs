use std::collections::{HashMap, VecDeque};

use super::atoms::{Atom, AtomSpace, Rule};
use super::StructureClass;

const NONE: u32 = u32::MAX;

/// The atoms of a class with the edge relation `V -> W`.
///
/// Successor sets are shared: all successors of `V` are the atoms agreeing
/// with the values `V` prescribes for the operands of its `X` formulas, so
/// atoms are grouped by those values once and every atom points at a group.
#[derive(Clone, Debug)]
pub struct AtomGraph {
    class: StructureClass,
    atoms: Vec<Atom>,
    group_of: Vec<u32>,
    groups: Vec<Vec<u32>>,
}

impl AtomGraph {
    /// Builds the graph and then removes, until none is left, every atom
    /// without `X false` that has no successor: such an atom cannot occur
    /// on any trace.
    pub fn new(space: &AtomSpace, class: StructureClass) -> Self {
        let mut graph = Self::build(space, class, space.enumerate_atoms(class));
        loop {
            let alive = graph.prune(space);
            if alive.len() == graph.atoms.len() {
                return graph;
            }
            graph = Self::build(space, class, alive);
        }
    }

    fn build(space: &AtomSpace, class: StructureClass, atoms: Vec<Atom>) -> Self {
        let mask: u64 = space.next_bases.iter().fold(0, |m, (_, l)| m | 1u64 << l.base);

        let mut by_key: HashMap<u64, Vec<u32>> = HashMap::new();
        for (k, a) in atoms.iter().enumerate() {
            by_key.entry(a.bits() & mask).or_default().push(k as u32);
        }

        let mut key_to_group: HashMap<u64, u32> = HashMap::new();
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let mut group_of = Vec::with_capacity(atoms.len());
        for &a in &atoms {
            if space.is_terminal(a) {
                group_of.push(NONE);
                continue;
            }
            let group = required_key(space, a).and_then(|key| {
                let members = by_key.get(&key)?;
                Some(*key_to_group.entry(key).or_insert_with(|| {
                    groups.push(members.clone());
                    (groups.len() - 1) as u32
                }))
            });
            group_of.push(group.unwrap_or(NONE));
        }
        AtomGraph {
            class,
            atoms,
            group_of,
            groups,
        }
    }

    /// Atoms that survive iterated removal of dead ends.
    fn prune(&self, space: &AtomSpace) -> Vec<Atom> {
        let n = self.atoms.len();
        let mut alive = vec![true; n];
        let mut group_size: Vec<usize> = self.groups.iter().map(Vec::len).collect();
        let mut member_groups: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); self.groups.len()];
        for (g, members) in self.groups.iter().enumerate() {
            for &w in members {
                member_groups[w as usize].push(g as u32);
            }
        }
        for (v, &g) in self.group_of.iter().enumerate() {
            if g != NONE {
                preds[g as usize].push(v as u32);
            }
        }
        let mut dead: Vec<usize> = (0..n)
            .filter(|&v| self.group_of[v] == NONE && !space.is_terminal(self.atoms[v]))
            .collect();
        for &v in &dead {
            alive[v] = false;
        }
        while let Some(w) = dead.pop() {
            for &g in &member_groups[w] {
                group_size[g as usize] -= 1;
                if group_size[g as usize] == 0 {
                    for &v in &preds[g as usize] {
                        if std::mem::replace(&mut alive[v as usize], false) {
                            dead.push(v as usize);
                        }
                    }
                }
            }
        }
        (0..n).filter(|&v| alive[v]).map(|v| self.atoms[v]).collect()
    }

    pub fn class(&self) -> StructureClass {
        self.class
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Indices of the successors of atom `v`, in atom order.
    pub fn successors(&self, v: usize) -> &[u32] {
        match self.group_of[v] {
            NONE => &[],
            g => &self.groups[g as usize],
        }
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.successors(v).binary_search(&(w as u32)).is_ok()
    }

    pub fn index_of(&self, atom: Atom) -> Option<usize> {
        self.atoms.binary_search(&atom).ok()
    }

    /// Atoms from which `targets` is reachable, by propagating backwards
    /// through the shared successor groups.
    fn backward_closure(&self, targets: &[bool]) -> Vec<bool> {
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); self.groups.len()];
        for (v, &g) in self.group_of.iter().enumerate() {
            if g != NONE {
                preds[g as usize].push(v as u32);
            }
        }
        let mut member_groups: Vec<Vec<u32>> = vec![Vec::new(); self.atoms.len()];
        for (g, members) in self.groups.iter().enumerate() {
            for &w in members {
                member_groups[w as usize].push(g as u32);
            }
        }
        let mut good = targets.to_vec();
        let mut group_done = vec![false; self.groups.len()];
        let mut queue: VecDeque<usize> = (0..good.len()).filter(|&v| good[v]).collect();
        while let Some(w) = queue.pop_front() {
            for &g in &member_groups[w] {
                if std::mem::replace(&mut group_done[g as usize], true) {
                    continue;
                }
                for &v in &preds[g as usize] {
                    if !good[v as usize] {
                        good[v as usize] = true;
                        queue.push_back(v as usize);
                    }
                }
            }
        }
        good
    }

    /// Strongly connected components (iterative Tarjan); returns the
    /// component id of every atom and the number of components.
    fn components(&self) -> (Vec<u32>, usize) {
        let n = self.atoms.len();
        let mut index = vec![NONE; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![NONE; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut next_index = 0u32;
        let mut count = 0usize;
        let mut call: Vec<(u32, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != NONE {
                continue;
            }
            call.push((root as u32, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root as u32);
            on_stack[root] = true;
            while let Some(&(v, pos)) = call.last() {
                let succ = self.successors(v as usize);
                if pos < succ.len() {
                    let w = succ[pos] as usize;
                    call.last_mut().expect("nonempty").1 += 1;
                    if index[w] == NONE {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w as u32);
                        on_stack[w] = true;
                        call.push((w as u32, 0));
                    } else if on_stack[w] {
                        low[v as usize] = low[v as usize].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                let v = v as usize;
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack") as usize;
                        on_stack[w] = false;
                        comp[w] = count as u32;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
        (comp, count)
    }

    /// Breadth-first path from `from` to the nearest atom satisfying
    /// `target`, moving only through atoms allowed by `inside`. The path
    /// includes both ends; `min_steps` = 1 forbids the empty path.
    fn bfs(
        &self,
        from: usize,
        min_steps: usize,
        inside: impl Fn(usize) -> bool,
        target: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if min_steps == 0 && target(from) {
            return Some(vec![from]);
        }
        let mut parent = vec![NONE; self.atoms.len()];
        let mut seen = vec![false; self.atoms.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in self.successors(v) {
                let w = w as usize;
                if !inside(w) {
                    continue;
                }
                if target(w) {
                    let mut path = vec![w, v];
                    let mut cur = v;
                    while cur != from {
                        cur = parent[cur] as usize;
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v as u32;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// The values `V` forces on the next-operand bases of any successor, or
/// `None` if two `X` formulas make contradictory demands.
fn required_key(space: &AtomSpace, v: Atom) -> Option<u64> {
    let mut key = 0u64;
    let mut fixed = 0u64;
    for &(xb, operand) in &space.next_bases {
        let want = ((v.bits() >> xb) & 1 == 1) != operand.negated;
        let bit = 1u64 << operand.base;
        if fixed & bit != 0 {
            if (key & bit != 0) != want {
                return None;
            }
            continue;
        }
        fixed |= bit;
        if want {
            key |= bit;
        }
    }
    Some(key)
}

/// An acceptable chain through the atom graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainWitness {
    /// Ends in an atom containing `X false`.
    TerminalPath(Vec<Atom>),
    /// `prefix` followed by `cycle` repeated forever.
    LassoChain { prefix: Vec<Atom>, cycle: Vec<Atom> },
}

impl ChainWitness {
    pub fn atoms(&self) -> Vec<Atom> {
        match self {
            ChainWitness::TerminalPath(p) => p.clone(),
            ChainWitness::LassoChain { prefix, cycle } => {
                prefix.iter().chain(cycle.iter()).copied().collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ChainWitness::TerminalPath(p) => p.len(),
            ChainWitness::LassoChain { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which atoms root acceptable chains, and how to build one.
pub(crate) struct Search<'g> {
    graph: &'g AtomGraph,
    space: &'g AtomSpace,
    fin_good: Vec<bool>,
    inf_good: Vec<bool>,
    comp: Vec<u32>,
    accepting: Vec<bool>,
}

impl<'g> Search<'g> {
    pub fn new(space: &'g AtomSpace, graph: &'g AtomGraph) -> Self {
        let n = graph.len();
        let fin_good = if graph.class == StructureClass::Inf {
            vec![false; n]
        } else {
            let terminal: Vec<bool> = graph.atoms.iter().map(|&a| space.is_terminal(a)).collect();
            graph.backward_closure(&terminal)
        };
        let (comp, count) = if graph.class == StructureClass::Fin {
            (vec![NONE; n], 0)
        } else {
            graph.components()
        };
        let mut size = vec![0usize; count];
        let mut union = vec![0u64; count];
        let mut fulfilled = vec![0u64; count];
        let mut self_loop = vec![false; count];
        for (v, &c) in comp.iter().enumerate().take(n) {
            if c == NONE {
                continue;
            }
            let c = c as usize;
            let atom = graph.atoms[v];
            size[c] += 1;
            union[c] |= atom.bits();
            for &u in &space.until_bases {
                if let Rule::Until { right, .. } = space.rules[u] {
                    if space.holds(atom, right) {
                        fulfilled[c] |= 1 << u;
                    }
                }
            }
            if graph.has_edge(v, v) {
                self_loop[c] = true;
            }
        }
        let until_mask: u64 = space.until_bases.iter().map(|&u| 1u64 << u).sum();
        let accepting: Vec<bool> = (0..count)
            .map(|c| (size[c] > 1 || self_loop[c]) && union[c] & until_mask & !fulfilled[c] == 0)
            .collect();
        let inf_good = if count == 0 {
            vec![false; n]
        } else {
            let targets: Vec<bool> = comp.iter().map(|&c| c != NONE && accepting[c as usize]).collect();
            graph.backward_closure(&targets)
        };
        Search {
            graph,
            space,
            fin_good,
            inf_good,
            comp,
            accepting,
        }
    }

    pub fn fin_good(&self, v: usize) -> bool {
        self.fin_good[v]
    }

    pub fn inf_good(&self, v: usize) -> bool {
        self.inf_good[v]
    }

    fn atoms_of(&self, path: &[usize]) -> Vec<Atom> {
        path.iter().map(|&v| self.graph.atoms[v]).collect()
    }

    pub fn terminal_path(&self, from: usize) -> ChainWitness {
        let path = self
            .graph
            .bfs(from, 0, |_| true, |v| self.space.is_terminal(self.graph.atoms[v]))
            .expect("start atom reaches a terminal atom");
        ChainWitness::TerminalPath(self.atoms_of(&path))
    }

    pub fn lasso(&self, from: usize) -> ChainWitness {
        let in_accepting = |v: usize| self.comp[v] != NONE && self.accepting[self.comp[v] as usize];
        let stem = self
            .graph
            .bfs(from, 0, |_| true, in_accepting)
            .expect("start atom reaches an accepting component");
        let entry = *stem.last().expect("nonempty path");
        let c = self.comp[entry];
        let inside = |v: usize| self.comp[v] == c;

        let present: u64 = self
            .graph
            .atoms
            .iter()
            .enumerate()
            .filter(|&(v, _)| inside(v))
            .fold(0, |acc, (_, a)| acc | a.bits());
        let mut cycle = vec![entry];
        let mut current = entry;
        for &u in &self.space.until_bases {
            if present & (1 << u) == 0 {
                continue;
            }
            let Rule::Until { right, .. } = self.space.rules[u] else {
                unreachable!()
            };
            let fulfils = |v: usize| self.space.holds(self.graph.atoms[v], right);
            if cycle.iter().any(|&v| fulfils(v)) {
                continue;
            }
            let leg = self
                .graph
                .bfs(current, 0, inside, fulfils)
                .expect("accepting component fulfils its untils");
            cycle.extend_from_slice(&leg[1..]);
            current = *cycle.last().expect("nonempty");
        }
        let back = self
            .graph
            .bfs(current, 1, inside, |v| v == entry)
            .expect("components are strongly connected");
        cycle.extend_from_slice(&back[1..back.len() - 1]);

        ChainWitness::LassoChain {
            prefix: self.atoms_of(&stem[..stem.len() - 1]),
            cycle: self.atoms_of(&cycle),
        }
    }
}
