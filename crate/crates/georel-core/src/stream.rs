//! Counter-based splittable random streams.
//!
//! A [`RandomStream`] is keyed by `(master seed, replication index, role)`.
//! Output depends only on the key and the number of values drawn, never on
//! scheduling, so replication `i` produces the same draws whether the study
//! runs serially or on a thread pool. Substreams derived with
//! [`RandomStream::split`] are independent of the parent and of each other.
//!
//! Generation is a SplitMix64-style counter construction: the key is mixed
//! into a 64-bit stream id, and each output is `mix(stream_id ^ counter)`
//! with a Weyl-sequence counter. Non-cryptographic.

/// Logical purpose of a stream within a study; part of the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Lifetime sample for a single-population study.
    Sample,
    /// Stress sample (X) in a stress-strength study.
    Stress,
    /// Strength sample (Y) in a stress-strength study.
    Strength,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Sample => 0x5351,
            Role::Stress => 0x5352,
            Role::Strength => 0x5353,
        }
    }
}

const WEYL: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic pseudo-random stream. Cheap to construct and `Copy`-sized;
/// never share one instance between concurrent callers — derive substreams
/// instead.
#[derive(Debug, Clone)]
pub struct RandomStream {
    stream_id: u64,
    counter: u64,
}

impl RandomStream {
    /// Stream for replication `replication` of the study seeded with
    /// `master_seed`, serving the given `role`.
    pub fn new(master_seed: u64, replication: u64, role: Role) -> Self {
        let mut id = mix64(master_seed ^ 0xD134_2543_DE82_EF95);
        id = mix64(id ^ replication.wrapping_mul(0xA076_1D64_78BD_642F));
        id = mix64(id ^ role.tag().wrapping_mul(0xE703_7ED1_A0B4_28DB));
        RandomStream {
            stream_id: id,
            counter: mix64(id ^ WEYL),
        }
    }

    /// Derive an independent substream identified by `label`, without
    /// advancing `self`.
    pub fn split(&self, label: u64) -> Self {
        let id = mix64(self.stream_id ^ mix64(label ^ 0x94D0_49BB_1331_11EB));
        RandomStream {
            stream_id: id,
            counter: mix64(id ^ WEYL),
        }
    }

    /// Next raw 64-bit value.
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(WEYL);
        mix64(self.stream_id ^ self.counter)
    }

    /// Next uniform value in the half-open interval `[0, 1)` (53-bit).
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Next uniform value in the open interval `(0, 1)`; zero is skipped so
    /// inverse-transform samplers can take logarithms safely.
    pub fn next_open01(&mut self) -> f64 {
        loop {
            let u = self.next_f64();
            if u > 0.0 {
                return u;
            }
        }
    }
}
