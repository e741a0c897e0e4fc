pub mod construction;
pub mod exact_math;
pub mod geometry;
pub mod oracle;
pub mod topology;
