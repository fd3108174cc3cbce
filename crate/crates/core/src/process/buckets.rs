use rand::Rng;

use crate::rng::SimRng;

const ABSENT: u8 = u8::MAX;

/// Open vertices grouped by unpaired-point count, with a lower bound on the
/// smallest non-empty level.
#[derive(Clone, Debug)]
pub(crate) struct DegreeBuckets {
    lists: Vec<Vec<u32>>,
    pos: Vec<u32>,
    level: Vec<u8>,
    /// No non-empty level lies below this.
    floor: usize,
}

impl DegreeBuckets {
    /// All `n` vertices at level `d`.
    pub(crate) fn full(n: usize, d: usize) -> Self {
        let mut lists = vec![Vec::new(); d + 1];
        lists[d] = (0..n as u32).collect();
        DegreeBuckets {
            lists,
            pos: (0..n as u32).collect(),
            level: vec![d as u8; n],
            floor: d,
        }
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        self.level[v] != ABSENT
    }

    pub(crate) fn len(&self, c: usize) -> usize {
        self.lists[c].len()
    }

    pub(crate) fn remove(&mut self, v: usize) {
        let c = self.level[v] as usize;
        debug_assert!(c != ABSENT as usize);
        let list = &mut self.lists[c];
        let p = self.pos[v] as usize;
        let last = *list.last().unwrap();
        list[p] = last;
        self.pos[last as usize] = p as u32;
        list.pop();
        self.level[v] = ABSENT;
    }

    fn insert(&mut self, v: usize, c: usize) {
        self.pos[v] = self.lists[c].len() as u32;
        self.lists[c].push(v as u32);
        self.level[v] = c as u8;
        self.floor = self.floor.min(c);
    }

    /// Moves `v` one level down.
    pub(crate) fn lower(&mut self, v: usize) {
        let c = self.level[v] as usize;
        self.remove(v);
        self.insert(v, c - 1);
    }

    /// Smallest non-empty level.
    pub(crate) fn min_level(&mut self) -> Option<usize> {
        while self.floor < self.lists.len() && self.lists[self.floor].is_empty() {
            self.floor += 1;
        }
        (self.floor < self.lists.len()).then_some(self.floor)
    }

    pub(crate) fn pick(&self, c: usize, rng: &mut SimRng) -> usize {
        let list = &self.lists[c];
        list[rng.gen_range(0..list.len() as u64) as usize] as usize
    }
}
