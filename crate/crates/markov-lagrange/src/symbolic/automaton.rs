//! Compilation of a shift specification into automata.
//!
//! NFA states are `(unit, offset, context)`: the letter at `offset` of `unit`
//! has just been read and `context` holds the last `k` letters. Only states on
//! a bi-infinite path survive trimming. The deterministic automaton starts
//! from the set of unit-final states, so its language is the set of one-sided
//! sequences that begin at a block boundary.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::cf::{Digit, Word};
use crate::error::{Error, Result};
use crate::symbolic::spec::SftSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct NfaState {
    unit: usize,
    offset: usize,
    context: Vec<Digit>,
}

#[derive(Clone, Debug)]
pub struct Automaton {
    name: String,
    states: Vec<NfaState>,
    succ: Vec<Vec<(Digit, usize)>>,
    unit_lens: Vec<usize>,
    dfa: Vec<BTreeMap<Digit, usize>>,
}

fn has_forbidden_suffix(word: &[Digit], forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| word.ends_with(f.digits()))
}

/// All words of length `k` over `alphabet` avoiding `forbidden`.
fn contexts(alphabet: &[Digit], k: usize, forbidden: &[Word]) -> Vec<Vec<Digit>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for c in &out {
            for &a in alphabet {
                let mut e = c.clone();
                e.push(a);
                if !has_forbidden_suffix(&e, forbidden) {
                    next.push(e);
                }
            }
        }
        out = next;
    }
    out
}

impl Automaton {
    pub fn compile(spec: &SftSpec) -> Result<Self> {
        let units = spec.units();
        let k = spec
            .forbidden
            .iter()
            .map(Word::len)
            .max()
            .map_or(0, |m| m.saturating_sub(1).max(1));
        let ctxs = contexts(&spec.alphabet, k, &spec.forbidden);

        let mut states = Vec::new();
        let mut index: HashMap<NfaState, usize> = HashMap::new();
        for (u, w) in units.iter().enumerate() {
            for (j, &letter) in w.digits().iter().enumerate() {
                for c in &ctxs {
                    if k > 0 && c.last() != Some(&letter) {
                        continue;
                    }
                    let s = NfaState {
                        unit: u,
                        offset: j,
                        context: c.clone(),
                    };
                    index.insert(s.clone(), states.len());
                    states.push(s);
                }
            }
        }

        let mut succ: Vec<Vec<(Digit, usize)>> = vec![Vec::new(); states.len()];
        for (id, s) in states.iter().enumerate() {
            let here = &units[s.unit];
            let nexts: Vec<(usize, usize)> = if s.offset + 1 < here.len() {
                vec![(s.unit, s.offset + 1)]
            } else {
                (0..units.len())
                    .filter(|&v| spec.allows(here, &units[v]))
                    .map(|v| (v, 0))
                    .collect()
            };
            for (u, j) in nexts {
                let d = units[u].digits()[j];
                let mut ext = s.context.clone();
                ext.push(d);
                if has_forbidden_suffix(&ext, &spec.forbidden) {
                    continue;
                }
                let context = if k > 0 { ext[1..].to_vec() } else { Vec::new() };
                let target = NfaState {
                    unit: u,
                    offset: j,
                    context,
                };
                if let Some(&t) = index.get(&target) {
                    succ[id].push((d, t));
                }
            }
        }

        let alive = trim(&succ);
        if !alive.iter().any(|&a| a) {
            return Err(Error::EmptyShift(spec.name.clone()));
        }
        // Renumber surviving states.
        let mut renum = vec![usize::MAX; states.len()];
        let mut kept = Vec::new();
        for (i, s) in states.into_iter().enumerate() {
            if alive[i] {
                renum[i] = kept.len();
                kept.push(s);
            }
        }
        let mut kept_succ = vec![Vec::new(); kept.len()];
        for (i, edges) in succ.into_iter().enumerate() {
            if alive[i] {
                kept_succ[renum[i]] = edges
                    .into_iter()
                    .filter(|&(_, t)| alive[t])
                    .map(|(d, t)| (d, renum[t]))
                    .collect();
            }
        }

        let unit_lens: Vec<usize> = units.iter().map(Word::len).collect();
        let mut a = Automaton {
            name: spec.name.clone(),
            states: kept,
            succ: kept_succ,
            unit_lens,
            dfa: Vec::new(),
        };
        a.determinise();
        Ok(a)
    }

    fn determinise(&mut self) {
        let start: Vec<usize> = (0..self.states.len())
            .filter(|&i| self.states[i].offset + 1 == self.unit_lens[self.states[i].unit])
            .collect();
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut dfa: Vec<BTreeMap<Digit, usize>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut by_letter: BTreeMap<Digit, Vec<usize>> = BTreeMap::new();
            for &s in &sets[i] {
                for &(d, t) in &self.succ[s] {
                    by_letter.entry(d).or_default().push(t);
                }
            }
            let mut row = BTreeMap::new();
            for (d, mut set) in by_letter {
                set.sort_unstable();
                set.dedup();
                let id = match ids.get(&set) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        ids.insert(set.clone(), id);
                        sets.push(set);
                        id
                    }
                };
                row.insert(d, id);
            }
            dfa.push(row);
            i += 1;
        }
        self.dfa = dfa;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nfa_size(&self) -> usize {
        self.states.len()
    }

    pub fn dfa_size(&self) -> usize {
        self.dfa.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    /// Letters readable from a deterministic state, ascending.
    pub fn letters(&self, state: usize) -> impl Iterator<Item = Digit> + '_ {
        self.dfa[state].keys().copied()
    }

    pub fn step(&self, state: usize, d: Digit) -> Option<usize> {
        self.dfa[state].get(&d).copied()
    }

    pub fn run(&self, word: &[Digit]) -> Option<usize> {
        word.iter().try_fold(self.start(), |s, &d| self.step(s, d))
    }

    /// Strong connectivity of the trimmed presentation.
    pub fn is_transitive(&self) -> bool {
        let n = self.states.len();
        let mut pred = vec![Vec::new(); n];
        for (i, edges) in self.succ.iter().enumerate() {
            for &(_, t) in edges {
                pred[t].push(i);
            }
        }
        let reach = |adj: &dyn Fn(usize) -> Vec<usize>| -> usize {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for t in adj(v) {
                    if !seen[t] {
                        seen[t] = true;
                        count += 1;
                        queue.push_back(t);
                    }
                }
            }
            count
        };
        let fwd = reach(&|v| self.succ[v].iter().map(|&(_, t)| t).collect());
        let bwd = reach(&|v| pred[v].clone());
        fwd == n && bwd == n
    }

    /// Whether every one-sided sequence of `self` is one of `other`.
    pub fn is_contained_in(&self, other: &Automaton) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([(self.start(), other.start())]);
        seen.insert((self.start(), other.start()));
        while let Some((p, q)) = queue.pop_front() {
            for (&d, &p2) in &self.dfa[p] {
                let Some(q2) = other.step(q, d) else {
                    return false;
                };
                if seen.insert((p2, q2)) {
                    queue.push_back((p2, q2));
                }
            }
        }
        true
    }

    pub fn same_language(&self, other: &Automaton) -> bool {
        self.is_contained_in(other) && other.is_contained_in(self)
    }

    /// Whether the bi-infinite sequence `...www...` is admissible.
    pub fn accepts_periodic(&self, period: &[Digit]) -> bool {
        if period.is_empty() {
            return false;
        }
        let n = self.states.len();
        let mut current = vec![true; n];
        loop {
            let mut set = current.clone();
            for &d in period {
                let mut next = vec![false; n];
                for (s, _) in set.iter().enumerate().filter(|(_, &on)| on) {
                    for &(e, t) in &self.succ[s] {
                        if e == d {
                            next[t] = true;
                        }
                    }
                }
                set = next;
            }
            if set == current {
                return set.iter().any(|&b| b);
            }
            // The image of the full set shrinks monotonically to its limit.
            current = set;
        }
    }

    /// Labelled edges of the trimmed presentation.
    pub(crate) fn nfa_edges(&self) -> &[Vec<(Digit, usize)>] {
        &self.succ
    }
}

/// States lying on a bi-infinite path.
fn trim(succ: &[Vec<(Digit, usize)>]) -> Vec<bool> {
    let n = succ.len();
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        let mut has_pred = vec![false; n];
        for i in 0..n {
            if alive[i] {
                for &(_, t) in &succ[i] {
                    if alive[t] {
                        has_pred[t] = true;
                    }
                }
            }
        }
        for i in 0..n {
            if alive[i] {
                let has_succ = succ[i].iter().any(|&(_, t)| alive[t]);
                if !has_succ || !has_pred[i] {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return alive;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_shift_is_one_state() {
        let a = Automaton::compile(&SftSpec::letters("k12", &[1, 2], &[]).unwrap()).unwrap();
        assert_eq!(a.nfa_size(), 2);
        assert!(a.is_transitive());
        assert_eq!(a.letters(0).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn forbidden_words_cut_transitions() {
        let spec = SftSpec::letters("x", &[1, 2, 3], &["13", "31"]).unwrap();
        let a = Automaton::compile(&spec).unwrap();
        let s = a.run(&[1]).unwrap();
        assert_eq!(a.letters(s).collect::<Vec<_>>(), vec![1, 2]);
        assert!(a.run(&[3, 1]).is_none());
        assert!(a.accepts_periodic(&[1, 2, 3, 2]));
        assert!(!a.accepts_periodic(&[1, 3]));
        assert!(a.is_transitive());
    }

    #[test]
    fn block_alignment() {
        let spec = SftSpec::blocks("b", &["11", "22"]).unwrap();
        let a = Automaton::compile(&spec).unwrap();
        assert!(a.run(&[1, 1, 2, 2]).is_some());
        assert!(a.run(&[1, 2]).is_none());
        assert!(a.accepts_periodic(&[1, 2, 2, 1]));
        assert!(!a.accepts_periodic(&[1, 2]));
    }

    #[test]
    fn adjacency_rules_restrict_successors() {
        let spec = SftSpec::blocks("b", &["1", "33"])
            .unwrap()
            .with_rule("33", "33", false)
            .unwrap();
        let a = Automaton::compile(&spec).unwrap();
        assert!(a.run(&[3, 3, 3, 3]).is_none());
        assert!(a.run(&[3, 3, 1, 3, 3]).is_some());
    }

    #[test]
    fn containment_and_equality() {
        let small = Automaton::compile(&SftSpec::blocks("b", &["11", "22"]).unwrap()).unwrap();
        let big = Automaton::compile(&SftSpec::letters("k12", &[1, 2], &[]).unwrap()).unwrap();
        assert!(small.is_contained_in(&big));
        assert!(!big.is_contained_in(&small));
        assert!(big.same_language(&big));
    }

    #[test]
    fn dead_ends_are_trimmed() {
        // 2 may only be followed by 3, which cannot be followed by anything.
        let spec = SftSpec::letters("d", &[1, 2, 3], &["21", "22", "31", "32", "33"]).unwrap();
        let a = Automaton::compile(&spec).unwrap();
        assert_eq!(a.letters(0).collect::<Vec<_>>(), vec![1]);
        let empty = SftSpec::letters("e", &[1], &["1"]).unwrap();
        assert!(matches!(Automaton::compile(&empty), Err(Error::EmptyShift(_))));
    }

    #[test]
    fn disconnected_shift_is_not_transitive() {
        let spec = SftSpec::letters("two", &[1, 2], &["12", "21"]).unwrap();
        assert!(!Automaton::compile(&spec).unwrap().is_transitive());
    }
}
