use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// OCT diagnosis classes, in the classifier's logit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Class {
    Cnv,
    Dme,
    Drusen,
    Normal,
}

impl Class {
    pub const ALL: [Class; 4] = [Class::Cnv, Class::Dme, Class::Drusen, Class::Normal];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Class> {
        Class::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::Cnv => "CNV",
            Class::Dme => "DME",
            Class::Drusen => "DRUSEN",
            Class::Normal => "NORMAL",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

/// Accepts the class name in any case, or its logit index.
impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(i) = t.parse::<usize>() {
            return Class::from_index(i).ok_or_else(|| Error::UnknownClass(s.to_string()));
        }
        Class::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}
