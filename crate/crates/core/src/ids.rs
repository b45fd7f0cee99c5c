//! Opaque identifiers.
//!
//! Every identifier is allocated from a per-kind counter while the event log
//! is applied, so replaying the same log always yields the same ids.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl FromStr for $name {
            type Err = std::num::ParseIntError;

            /// Accepts both the bare number and the prefixed display form.
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let digits = s.strip_prefix($prefix).unwrap_or(s);
                digits.parse().map($name)
            }
        }
    };
}

id_type!(
    /// A person taking part in the course.
    ActorId, "a"
);
id_type!(
    /// A project group.
    GroupId, "g"
);
id_type!(TaskId, "t");
id_type!(DeliverableId, "d");
id_type!(PostId, "p");
id_type!(
    /// A node of the tutoring taxonomy.
    SubjectId, "s"
);
id_type!(DiscussionId, "f");
id_type!(CourseId, "c");

impl ActorId {
    /// Pseudo-actor used for administrative commands (course setup, roster).
    pub const SYSTEM: ActorId = ActorId(0);
}

/// Position of an event in the log. Sequence numbers start at 1.
pub type Seq = u64;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_prefixed_and_bare() {
        assert_eq!("a12".parse::<ActorId>().unwrap(), ActorId(12));
        assert_eq!("12".parse::<ActorId>().unwrap(), ActorId(12));
        assert_eq!(GroupId(3).to_string(), "g3");
        assert!("x3".parse::<GroupId>().is_err());
    }
}
