//! String-backed identifier newtypes for the domain vocabulary.

use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(id: &str) -> Self {
                Self(id.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(id: String) -> Self {
                Self(id)
            }
        }
    };
}

id_type!(
    /// Vertex of a directed graph or wiring diagram.
    VertexId
);
id_type!(
    /// Arrow (wire) of a directed graph or wiring diagram.
    ArrowId
);
id_type!(
    /// Type (object) of an olog.
    TypeId
);
id_type!(
    /// Aspect (arrow) of an olog.
    AspectId
);
id_type!(
    /// Sensing-function declaration.
    SensorId
);
