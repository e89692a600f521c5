use std::fmt;

use crate::FockError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::A => Mode::B,
            Mode::B => Mode::A,
        }
    }
}

/// Number-basis truncation `{|0⟩ … |N⟩}` per mode for one or two modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
}

impl fmt::Display for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-mode cutoff {}", self.modes, self.cutoff)
    }
}

pub fn make_space(modes: usize, cutoff: usize) -> Result<FockSpace, FockError> {
    FockSpace::new(modes, cutoff)
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self, FockError> {
        if !(1..=2).contains(&modes) {
            return Err(FockError::UnsupportedModes(modes));
        }
        if cutoff < 1 {
            return Err(FockError::InvalidCutoff(cutoff));
        }
        Ok(Self { modes, cutoff })
    }

    pub fn single(cutoff: usize) -> Result<Self, FockError> {
        Self::new(1, cutoff)
    }

    pub fn two(cutoff: usize) -> Result<Self, FockError> {
        Self::new(2, cutoff)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }

    pub fn has_mode(&self, mode: Mode) -> bool {
        mode.index() < self.modes
    }

    pub fn check_mode(&self, mode: Mode) -> Result<(), FockError> {
        if self.has_mode(mode) {
            Ok(())
        } else {
            Err(FockError::ModeNotPresent(mode))
        }
    }

    /// Same mode count, different cutoff.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self, FockError> {
        Self::new(self.modes, cutoff)
    }

    /// Basis index of the occupations `[n_a]` or `[n_a, n_b]`; `None` if out of range.
    pub fn index(&self, occ: &[usize]) -> Option<usize> {
        if occ.len() != self.modes || occ.iter().any(|&n| n > self.cutoff) {
            return None;
        }
        Some(occ.iter().fold(0, |acc, &n| acc * (self.cutoff + 1) + n))
    }

    /// Occupations `[n_a, n_b]` of a basis index (`n_b = 0` for one mode).
    pub fn occupations(&self, index: usize) -> [usize; 2] {
        if self.modes == 1 {
            [index, 0]
        } else {
            [index / (self.cutoff + 1), index % (self.cutoff + 1)]
        }
    }

    /// Indices whose occupations are all `≤ k`, in basis order.
    pub fn inner_indices(&self, k: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| {
                let o = self.occupations(i);
                o[..self.modes].iter().all(|&n| n <= k)
            })
            .collect()
    }

    /// Index of the same occupations in another space with the same mode count.
    pub fn map_index(&self, index: usize, into: &FockSpace) -> Option<usize> {
        let o = self.occupations(index);
        into.index(&o[..self.modes])
    }
}
