//! Plutchik basic emotions and the run-scoped active emotion set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// One of Plutchik's eight basic emotions.
///
/// Variants are declared in alphabetical order, which is also the column
/// order used by every table and arc export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Emotion {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
}

impl Emotion {
    pub const ALL: [Emotion; 8] = [
        Emotion::Anger,
        Emotion::Anticipation,
        Emotion::Disgust,
        Emotion::Fear,
        Emotion::Joy,
        Emotion::Sadness,
        Emotion::Surprise,
        Emotion::Trust,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Anticipation => "anticipation",
            Emotion::Disgust => "disgust",
            Emotion::Fear => "fear",
            Emotion::Joy => "joy",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
            Emotion::Trust => "trust",
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Emotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_lowercase();
        Emotion::ALL
            .into_iter()
            .find(|e| e.name() == lower)
            .ok_or_else(|| Error::UnknownEmotion {
                line: 0,
                name: s.to_string(),
            })
    }
}

impl Serialize for Emotion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Emotion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered, duplicate-free set of emotions active for a run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmotionSet {
    members: Vec<Emotion>,
}

impl Default for EmotionSet {
    /// anger, anticipation, disgust, fear, joy, sadness, trust
    fn default() -> Self {
        EmotionSet::new(Emotion::ALL.into_iter().filter(|e| *e != Emotion::Surprise))
    }
}

impl EmotionSet {
    pub fn new(emotions: impl IntoIterator<Item = Emotion>) -> Self {
        let mut members: Vec<Emotion> = emotions.into_iter().collect();
        members.sort();
        members.dedup();
        EmotionSet { members }
    }

    pub fn plutchik() -> Self {
        EmotionSet::new(Emotion::ALL)
    }

    /// Parses a comma-separated list such as `joy,fear`.
    pub fn parse_list(list: &str) -> Result<Self, Error> {
        let emotions = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Emotion>, _>>()?;
        if emotions.is_empty() {
            return Err(Error::Config("emotion set is empty".into()));
        }
        Ok(EmotionSet::new(emotions))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: Emotion) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    /// Column index of `e`, if active.
    pub fn index_of(&self, e: Emotion) -> Option<usize> {
        self.members.binary_search(&e).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Emotion> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[Emotion] {
        &self.members
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.members.iter().map(|e| e.name()).collect()
    }
}

impl fmt::Display for EmotionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(","))
    }
}

impl Serialize for EmotionSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.members.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EmotionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(EmotionSet::new(Vec::<Emotion>::deserialize(d)?))
    }
}
