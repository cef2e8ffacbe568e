//! Change detection.

mod adwin;

pub use adwin::{Adwin, Bucket, DEFAULT_MAX_BUCKETS};
