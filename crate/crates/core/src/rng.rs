//! Reproducible random streams.
//!
//! Every consumer of randomness gets its own ChaCha8 stream derived from a
//! root seed and a fixed stream id, so the sequence drawn by one component
//! never depends on how much another component consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamKind {
    InitialSample = 1,
    Pairing = 2,
    Crossover = 3,
    Mutation = 4,
    TieBreak = 5,
    Noise = 6,
    Oracle = 7,
}

pub fn stream(seed: u64, kind: StreamKind) -> Stream {
    sub_stream(seed, kind as u64)
}

/// Stream `id` under `seed`. Ids below 16 are reserved for [`StreamKind`].
pub fn sub_stream(seed: u64, id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// The algorithm-side streams of one run.
#[derive(Debug, Clone)]
pub struct AlgorithmStreams {
    pub initial: Stream,
    pub operators: OperatorStreams,
    pub tie_break: Stream,
}

impl AlgorithmStreams {
    pub fn new(seed: u64) -> Self {
        AlgorithmStreams {
            initial: stream(seed, StreamKind::InitialSample),
            operators: OperatorStreams::new(seed),
            tie_break: stream(seed, StreamKind::TieBreak),
        }
    }
}

/// Streams consumed by the genetic operators.
#[derive(Debug, Clone)]
pub struct OperatorStreams {
    pub pairing: Stream,
    pub crossover: Stream,
    pub mutation: Stream,
}

impl OperatorStreams {
    pub fn new(seed: u64) -> Self {
        OperatorStreams {
            pairing: stream(seed, StreamKind::Pairing),
            crossover: stream(seed, StreamKind::Crossover),
            mutation: stream(seed, StreamKind::Mutation),
        }
    }
}
