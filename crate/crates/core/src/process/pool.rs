use rand::Rng;

use crate::rng::SimRng;

/// Unpaired points of `groups` owners with `size` points each.
///
/// Points of one owner are interchangeable, so the pool stores owner ids,
/// one entry per unpaired point. Drawing a uniform entry and removing a point
/// of a given owner are both O(`size`).
#[derive(Clone, Debug)]
pub(crate) struct PointPool {
    size: usize,
    /// Owner of each unpaired point.
    tokens: Vec<u32>,
    /// `slots[g*size + i]` for `i < remaining[g]` are the positions in
    /// `tokens` of owner `g`'s unpaired points.
    slots: Vec<u32>,
    remaining: Vec<u8>,
}

impl PointPool {
    pub(crate) fn new(groups: usize, size: usize) -> Self {
        assert!(size <= u8::MAX as usize && groups * size <= u32::MAX as usize);
        let total = groups * size;
        PointPool {
            size,
            tokens: (0..total).map(|p| (p / size) as u32).collect(),
            slots: (0..total as u32).collect(),
            remaining: vec![size as u8; groups],
        }
    }

    pub(crate) fn total(&self) -> usize {
        self.tokens.len()
    }

    pub(crate) fn remaining(&self, g: usize) -> usize {
        self.remaining[g] as usize
    }

    fn slot_of(&self, g: usize, pos: u32) -> usize {
        let base = g * self.size;
        (base..base + self.remaining[g] as usize)
            .find(|&s| self.slots[s] == pos)
            .expect("pool position not registered to its owner")
    }

    fn remove_at(&mut self, pos: usize) -> usize {
        let g = self.tokens[pos] as usize;
        let s = self.slot_of(g, pos as u32);
        let last_slot = g * self.size + self.remaining[g] as usize - 1;
        self.slots[s] = self.slots[last_slot];
        self.remaining[g] -= 1;

        let last = self.tokens.len() - 1;
        if pos != last {
            let h = self.tokens[last] as usize;
            let hs = self.slot_of(h, last as u32);
            self.slots[hs] = pos as u32;
            self.tokens[pos] = h as u32;
        }
        self.tokens.pop();
        g
    }

    /// Removes a uniformly random unpaired point and returns its owner.
    pub(crate) fn draw(&mut self, rng: &mut SimRng) -> usize {
        let pos = rng.gen_range(0..self.tokens.len() as u64) as usize;
        self.remove_at(pos)
    }

    /// Removes one unpaired point of owner `g`.
    pub(crate) fn take(&mut self, g: usize) {
        let r = self.remaining[g] as usize;
        debug_assert!(r > 0);
        let pos = self.slots[g * self.size + r - 1] as usize;
        self.remove_at(pos);
    }

    /// Recounts every owner from the token array.
    pub(crate) fn recount(&self) -> Vec<usize> {
        let mut c = vec![0; self.remaining.len()];
        for &t in &self.tokens {
            c[t as usize] += 1;
        }
        c
    }
}
