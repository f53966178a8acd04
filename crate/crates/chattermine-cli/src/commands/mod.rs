pub mod aggregate;
pub mod classify;
pub mod readability;
pub mod tag;
pub mod topics;
