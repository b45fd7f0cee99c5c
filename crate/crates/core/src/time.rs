//! Calendar helpers: reporting periods, clocks and exact hour quantities.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;
use std::sync::Mutex;

use chrono::{DateTime, Datelike, Duration, NaiveDate, NaiveTime, TimeZone, Utc, Weekday};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Instants are always UTC. Course-local dates are the UTC calendar date.
pub type Timestamp = DateTime<Utc>;

/// A reporting period: one ISO calendar week.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Period {
    year: i32,
    week: u32,
}

impl Period {
    pub fn new(year: i32, week: u32) -> Option<Period> {
        NaiveDate::from_isoywd_opt(year, week, Weekday::Mon).map(|_| Period { year, week })
    }

    pub fn containing(date: NaiveDate) -> Period {
        let iso = date.iso_week();
        Period {
            year: iso.year(),
            week: iso.week(),
        }
    }

    pub fn of(ts: Timestamp) -> Period {
        Period::containing(ts.date_naive())
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn week(&self) -> u32 {
        self.week
    }

    /// Monday of the week.
    pub fn first_day(&self) -> NaiveDate {
        NaiveDate::from_isoywd_opt(self.year, self.week, Weekday::Mon).expect("validated period")
    }

    /// Sunday of the week.
    pub fn last_day(&self) -> NaiveDate {
        self.first_day() + Duration::days(6)
    }

    pub fn contains_date(&self, date: NaiveDate) -> bool {
        Period::containing(date) == *self
    }

    /// Inclusive start instant.
    pub fn start(&self) -> Timestamp {
        start_of_day(self.first_day())
    }

    /// Exclusive end instant (the following Monday, midnight).
    pub fn end(&self) -> Timestamp {
        start_of_day(self.first_day() + Duration::days(7))
    }

    pub fn contains(&self, ts: Timestamp) -> bool {
        ts >= self.start() && ts < self.end()
    }

    pub fn next(&self) -> Period {
        Period::containing(self.first_day() + Duration::days(7))
    }

    pub fn previous(&self) -> Period {
        Period::containing(self.first_day() - Duration::days(7))
    }
}

pub fn start_of_day(date: NaiveDate) -> Timestamp {
    Utc.from_utc_datetime(&date.and_time(NaiveTime::MIN))
}

/// First instant after the given day.
pub fn end_of_day(date: NaiveDate) -> Timestamp {
    start_of_day(date) + Duration::days(1)
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-W{:02}", self.year, self.week)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ISO week `{0}`, expected YYYY-Www")]
pub struct ParsePeriodError(String);

impl FromStr for Period {
    type Err = ParsePeriodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePeriodError(s.to_string());
        let (year, week) = s.split_once("-W").ok_or_else(err)?;
        let year = year.parse().map_err(|_| err())?;
        let week = week.parse().map_err(|_| err())?;
        Period::new(year, week).ok_or_else(err)
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Source of "now" for appended events.
pub trait Clock: Send + Sync {
    fn now(&self) -> Timestamp;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        Utc::now()
    }
}

/// A clock that only moves when told to. Used by the simulator and tests.
#[derive(Debug)]
pub struct ManualClock {
    now: Mutex<Timestamp>,
}

impl ManualClock {
    pub fn new(start: Timestamp) -> ManualClock {
        ManualClock {
            now: Mutex::new(start),
        }
    }

    pub fn set(&self, ts: Timestamp) {
        *self.now.lock().unwrap() = ts;
    }

    pub fn advance(&self, by: Duration) {
        *self.now.lock().unwrap() += by;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Timestamp {
        *self.now.lock().unwrap()
    }
}

/// Working hours held as an exact count of hundredths of an hour.
///
/// Sums over hours are exact, so group totals always equal the sum of the
/// member totals regardless of summation order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hours(u32);

impl Hours {
    pub const ZERO: Hours = Hours(0);
    pub const MAX_ENTRY: Hours = Hours(24 * 100);

    pub fn from_centi(centi: u32) -> Hours {
        Hours(centi)
    }

    /// Rounds to the nearest hundredth. Returns `None` for negative or
    /// non-finite input.
    pub fn from_f64(hours: f64) -> Option<Hours> {
        if !hours.is_finite() || hours < 0.0 || hours > u32::MAX as f64 / 100.0 {
            return None;
        }
        Some(Hours((hours * 100.0).round() as u32))
    }

    pub fn centi(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl Add for Hours {
    type Output = Hours;

    fn add(self, rhs: Hours) -> Hours {
        Hours(self.0 + rhs.0)
    }
}

impl AddAssign for Hours {
    fn add_assign(&mut self, rhs: Hours) {
        self.0 += rhs.0;
    }
}

impl Sum for Hours {
    fn sum<I: Iterator<Item = Hours>>(iter: I) -> Hours {
        iter.fold(Hours::ZERO, Add::add)
    }
}

impl fmt::Display for Hours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl Serialize for Hours {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Hours {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = f64::deserialize(deserializer)?;
        Hours::from_f64(raw).ok_or_else(|| serde::de::Error::custom("hours must be non-negative"))
    }
}
