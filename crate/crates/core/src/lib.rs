pub mod algebra;
pub mod channel;
pub mod feasibility;
pub mod linalg;
mod multimod;
pub mod ratesim;
pub mod schemes;
