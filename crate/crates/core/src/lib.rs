pub mod algebra;
pub mod arith;
pub mod classify;
pub mod froberg;
pub mod linalg;
pub mod oracle;
pub mod survey;
