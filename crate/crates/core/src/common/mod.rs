//! Numerical primitives shared by every model: vectors, datasets, the seeded
//! random stream, distances and decay schedules.

mod distance;
mod rng;
mod schedule;
mod vector;

pub use distance::{euclidean_distance, find_winner, find_winners, squared_distance};
pub(crate) use distance::{check_same_dim, squared_distance_unchecked};
pub use rng::RandomStream;
pub use schedule::{DecayKind, DecaySchedule};
pub use vector::{Dataset, Vector};
