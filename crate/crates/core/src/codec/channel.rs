use std::fmt;

/// Output of one use of the union channel: the set `{x₁, x₂}`.
///
/// Stored as an ordered pair `lo ≤ hi` of 0-based symbols; a singleton has
/// `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelOutput {
    lo: u8,
    hi: u8,
}

impl ChannelOutput {
    pub fn singleton(x: u8) -> Self {
        ChannelOutput { lo: x, hi: x }
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    /// Number of distinct symbols (1 or 2).
    pub fn size(&self) -> usize {
        if self.is_singleton() {
            1
        } else {
            2
        }
    }

    /// The symbols in increasing order.
    pub fn symbols(&self) -> (u8, u8) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, x: u8) -> bool {
        x == self.lo || x == self.hi
    }

    /// Given one of the inputs, the other one.
    pub fn other_input(&self, mine: u8) -> Option<u8> {
        if mine == self.lo {
            Some(self.hi)
        } else if mine == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

/// The deterministic two-user union channel.
pub fn union_channel(x1: u8, x2: u8) -> ChannelOutput {
    ChannelOutput {
        lo: x1.min(x2),
        hi: x1.max(x2),
    }
}

impl fmt::Display for ChannelOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            write!(f, "{{{}}}", self.lo as usize + 1)
        } else {
            write!(f, "{{{},{}}}", self.lo as usize + 1, self.hi as usize + 1)
        }
    }
}
