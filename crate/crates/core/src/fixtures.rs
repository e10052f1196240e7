//! Bundled grouped tables: equivalized disposable weekly income (dollars)
//! and net household wealth (thousands of dollars), counts in thousands.

use crate::error::Result;
use crate::grouped::GroupedBins;

pub const YEARS: [u16; 5] = [2004, 2006, 2010, 2012, 2014];

/// Disposable weekly income table as CSV text.
pub fn dwi_csv(year: u16) -> Option<&'static str> {
    Some(match year {
        2004 => include_str!("../data/dwi_2004.csv"),
        2006 => include_str!("../data/dwi_2006.csv"),
        2010 => include_str!("../data/dwi_2010.csv"),
        2012 => include_str!("../data/dwi_2012.csv"),
        2014 => include_str!("../data/dwi_2014.csv"),
        _ => return None,
    })
}

/// Net household wealth table as CSV text.
pub fn nhw_csv(year: u16) -> Option<&'static str> {
    Some(match year {
        2004 => include_str!("../data/nhw_2004.csv"),
        2006 => include_str!("../data/nhw_2006.csv"),
        2010 => include_str!("../data/nhw_2010.csv"),
        2012 => include_str!("../data/nhw_2012.csv"),
        2014 => include_str!("../data/nhw_2014.csv"),
        _ => return None,
    })
}

pub fn dwi(year: u16) -> Option<Result<GroupedBins>> {
    dwi_csv(year).map(GroupedBins::parse)
}

pub fn nhw(year: u16) -> Option<Result<GroupedBins>> {
    nhw_csv(year).map(GroupedBins::parse)
}
