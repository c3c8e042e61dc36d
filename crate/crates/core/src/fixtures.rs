//! In-memory gazetteer and table fixtures for tests, examples, and synthetic
//! pipelines.
//!
//! The fixture gazetteer is a miniature Geonames dump: every US state plus
//! D.C., a spread of cities with realistic coordinates and populations, the
//! large-state region rows, and a handful of countries. It deliberately
//! contains homonyms (four Springfields, two Portlands, two Cambridges, two
//! Vancouvers, Paris in both France and Texas, Georgia as state and country)
//! so disambiguation paths get exercised.

use std::collections::BTreeMap;

struct Row {
    id: u64,
    name: &'static str,
    alternates: &'static str,
    lat: f64,
    lon: f64,
    class: &'static str,
    code: &'static str,
    country: &'static str,
    admin1: &'static str,
    population: u64,
}

const fn row(
    id: u64,
    name: &'static str,
    alternates: &'static str,
    lat: f64,
    lon: f64,
    class: &'static str,
    code: &'static str,
    country: &'static str,
    admin1: &'static str,
    population: u64,
) -> Row {
    Row {
        id,
        name,
        alternates,
        lat,
        lon,
        class,
        code,
        country,
        admin1,
        population,
    }
}

#[rustfmt::skip]
const COUNTRIES: &[Row] = &[
    row(101, "United States", "usa,america,united states of america", 39.76, -98.5, "A", "PCLI", "US", "", 331000000),
    row(102, "United Kingdom", "uk,britain,great britain", 54.0, -2.0, "A", "PCLI", "GB", "", 67000000),
    row(103, "France", "", 46.0, 2.0, "A", "PCLI", "FR", "", 67400000),
    row(104, "Canada", "", 60.0, -110.0, "A", "PCLI", "CA", "", 38000000),
    row(105, "Germany", "deutschland", 51.0, 9.0, "A", "PCLI", "DE", "", 83200000),
    row(106, "Georgia", "", 42.0, 43.5, "A", "PCLI", "GE", "", 3700000),
];

#[rustfmt::skip]
const STATES: &[Row] = &[
    row(1001, "Alabama", "", 32.806671, -86.791130, "A", "ADM1", "US", "AL", 5024279),
    row(1002, "Alaska", "", 61.370716, -152.404419, "A", "ADM1", "US", "AK", 733391),
    row(1003, "Arizona", "", 33.729759, -111.431221, "A", "ADM1", "US", "AZ", 7151502),
    row(1004, "Arkansas", "", 34.969704, -92.373123, "A", "ADM1", "US", "AR", 3011524),
    row(1005, "California", "", 36.116203, -119.681564, "A", "ADM1", "US", "CA", 39538223),
    row(1006, "Colorado", "", 39.059811, -105.311104, "A", "ADM1", "US", "CO", 5773714),
    row(1007, "Connecticut", "", 41.597782, -72.755371, "A", "ADM1", "US", "CT", 3605944),
    row(1008, "Delaware", "", 39.318523, -75.507141, "A", "ADM1", "US", "DE", 989948),
    row(1009, "District of Columbia", "", 38.897438, -77.026817, "A", "ADM1", "US", "DC", 689545),
    row(1010, "Florida", "", 27.766279, -81.686783, "A", "ADM1", "US", "FL", 21538187),
    row(1011, "Georgia", "", 33.040619, -83.643074, "A", "ADM1", "US", "GA", 10711908),
    row(1012, "Hawaii", "", 21.094318, -157.498337, "A", "ADM1", "US", "HI", 1455271),
    row(1013, "Idaho", "", 44.240459, -114.478828, "A", "ADM1", "US", "ID", 1839106),
    row(1014, "Illinois", "", 40.349457, -88.986137, "A", "ADM1", "US", "IL", 12812508),
    row(1015, "Indiana", "", 39.849426, -86.258278, "A", "ADM1", "US", "IN", 6785528),
    row(1016, "Iowa", "", 42.011539, -93.210526, "A", "ADM1", "US", "IA", 3190369),
    row(1017, "Kansas", "", 38.526600, -96.726486, "A", "ADM1", "US", "KS", 2937880),
    row(1018, "Kentucky", "", 37.668140, -84.670067, "A", "ADM1", "US", "KY", 4505836),
    row(1019, "Louisiana", "", 31.169546, -91.867805, "A", "ADM1", "US", "LA", 4657757),
    row(1020, "Maine", "", 44.693947, -69.381927, "A", "ADM1", "US", "ME", 1362359),
    row(1021, "Maryland", "", 39.063946, -76.802101, "A", "ADM1", "US", "MD", 6177224),
    row(1022, "Massachusetts", "", 42.230171, -71.530106, "A", "ADM1", "US", "MA", 7029917),
    row(1023, "Michigan", "", 43.326618, -84.536095, "A", "ADM1", "US", "MI", 10077331),
    row(1024, "Minnesota", "", 45.694454, -93.900192, "A", "ADM1", "US", "MN", 5706494),
    row(1025, "Mississippi", "", 32.741646, -89.678696, "A", "ADM1", "US", "MS", 2961279),
    row(1026, "Missouri", "", 38.456085, -92.288368, "A", "ADM1", "US", "MO", 6154913),
    row(1027, "Montana", "", 46.921925, -110.454353, "A", "ADM1", "US", "MT", 1084225),
    row(1028, "Nebraska", "", 41.125370, -98.268082, "A", "ADM1", "US", "NE", 1961504),
    row(1029, "Nevada", "", 38.313515, -117.055374, "A", "ADM1", "US", "NV", 3104614),
    row(1030, "New Hampshire", "", 43.452492, -71.563896, "A", "ADM1", "US", "NH", 1377529),
    row(1031, "New Jersey", "", 40.298904, -74.521011, "A", "ADM1", "US", "NJ", 9288994),
    row(1032, "New Mexico", "", 34.840515, -106.248482, "A", "ADM1", "US", "NM", 2117522),
    row(1033, "New York", "", 42.165726, -74.948051, "A", "ADM1", "US", "NY", 20201249),
    row(1034, "North Carolina", "", 35.630066, -79.806419, "A", "ADM1", "US", "NC", 10439388),
    row(1035, "North Dakota", "", 47.528912, -99.784012, "A", "ADM1", "US", "ND", 779094),
    row(1036, "Ohio", "", 40.388783, -82.764915, "A", "ADM1", "US", "OH", 11799448),
    row(1037, "Oklahoma", "", 35.565342, -96.928917, "A", "ADM1", "US", "OK", 3959353),
    row(1038, "Oregon", "", 44.572021, -122.070938, "A", "ADM1", "US", "OR", 4237256),
    row(1039, "Pennsylvania", "", 40.590752, -77.209755, "A", "ADM1", "US", "PA", 13002700),
    row(1040, "Rhode Island", "", 41.680893, -71.511780, "A", "ADM1", "US", "RI", 1097379),
    row(1041, "South Carolina", "", 33.856892, -80.945007, "A", "ADM1", "US", "SC", 5118425),
    row(1042, "South Dakota", "", 44.299782, -99.438828, "A", "ADM1", "US", "SD", 886667),
    row(1043, "Tennessee", "", 35.747845, -86.692345, "A", "ADM1", "US", "TN", 6910840),
    row(1044, "Texas", "", 31.054487, -97.563461, "A", "ADM1", "US", "TX", 29145505),
    row(1045, "Utah", "", 40.150032, -111.862434, "A", "ADM1", "US", "UT", 3271616),
    row(1046, "Vermont", "", 44.045876, -72.710686, "A", "ADM1", "US", "VT", 643077),
    row(1047, "Virginia", "", 37.769337, -78.169968, "A", "ADM1", "US", "VA", 8631393),
    row(1048, "Washington", "", 47.400902, -121.490494, "A", "ADM1", "US", "WA", 7705281),
    row(1049, "West Virginia", "", 38.491226, -80.954453, "A", "ADM1", "US", "WV", 1793716),
    row(1050, "Wisconsin", "", 44.268543, -89.616508, "A", "ADM1", "US", "WI", 5893718),
    row(1051, "Wyoming", "", 42.755966, -107.302490, "A", "ADM1", "US", "WY", 576851),
];

#[rustfmt::skip]
const REGIONS: &[Row] = &[
    row(2001, "Southern California", "", 34.0, -117.5, "L", "RGN", "US", "CA", 23500000),
    row(2002, "Central California", "", 36.5, -119.5, "L", "RGN", "US", "CA", 5000000),
    row(2003, "Northern California", "", 40.0, -122.0, "L", "RGN", "US", "CA", 15000000),
];

#[rustfmt::skip]
const CITIES: &[Row] = &[
    row(5001, "Boston", "", 42.3584, -71.0598, "P", "PPL", "US", "MA", 667137),
    row(5002, "Lowell", "", 42.6334, -71.3162, "P", "PPL", "US", "MA", 111346),
    row(5003, "Cambridge", "", 42.3736, -71.1097, "P", "PPL", "US", "MA", 118403),
    row(5004, "Worcester", "", 42.2626, -71.8023, "P", "PPL", "US", "MA", 185877),
    row(5005, "Springfield", "", 42.1015, -72.5898, "P", "PPL", "US", "MA", 155032),
    row(5006, "Springfield", "", 39.8017, -89.6437, "P", "PPL", "US", "IL", 116250),
    row(5007, "Springfield", "", 37.2153, -93.2982, "P", "PPL", "US", "MO", 166810),
    row(5008, "Springfield", "", 39.9242, -83.8088, "P", "PPL", "US", "OH", 58662),
    row(5009, "New York City", "new york", 40.7143, -74.0060, "P", "PPL", "US", "NY", 8804190),
    row(5010, "Newark", "", 40.7357, -74.1724, "P", "PPL", "US", "NJ", 311549),
    row(5011, "Los Angeles", "", 34.0522, -118.2437, "P", "PPL", "US", "CA", 3898747),
    row(5012, "Long Beach", "", 33.7670, -118.1892, "P", "PPL", "US", "CA", 466742),
    row(5013, "San Francisco", "", 37.7749, -122.4194, "P", "PPL", "US", "CA", 873965),
    row(5014, "Oakland", "", 37.8044, -122.2712, "P", "PPL", "US", "CA", 440646),
    row(5015, "Fresno", "", 36.7378, -119.7871, "P", "PPL", "US", "CA", 542107),
    row(5016, "Las Vegas", "", 36.1750, -115.1372, "P", "PPL", "US", "NV", 641903),
    row(5017, "Henderson", "", 36.0397, -114.9819, "P", "PPL", "US", "NV", 320189),
    row(5018, "Reno", "", 39.5296, -119.8138, "P", "PPL", "US", "NV", 264165),
    row(5019, "El Paso", "", 31.7587, -106.4869, "P", "PPL", "US", "TX", 678815),
    row(5020, "Houston", "", 29.7633, -95.3633, "P", "PPL", "US", "TX", 2304580),
    row(5021, "Galveston", "", 29.3013, -94.7977, "P", "PPL", "US", "TX", 53695),
    row(5022, "Dallas", "", 32.7831, -96.8067, "P", "PPL", "US", "TX", 1304379),
    row(5023, "Fort Worth", "", 32.7254, -97.3208, "P", "PPL", "US", "TX", 918915),
    row(5024, "Austin", "", 30.2672, -97.7431, "P", "PPL", "US", "TX", 961855),
    row(5025, "Tallahassee", "", 30.4383, -84.2807, "P", "PPL", "US", "FL", 196169),
    row(5026, "Miami", "", 25.7743, -80.1937, "P", "PPL", "US", "FL", 442241),
    row(5027, "Fort Lauderdale", "", 26.1223, -80.1434, "P", "PPL", "US", "FL", 182760),
    row(5028, "Juneau", "", 58.3019, -134.4197, "P", "PPL", "US", "AK", 32255),
    row(5029, "Anchorage", "", 61.2181, -149.9003, "P", "PPL", "US", "AK", 291247),
    row(5030, "Fairbanks", "", 64.8378, -147.7164, "P", "PPL", "US", "AK", 32515),
    row(5031, "Seattle", "", 47.6062, -122.3321, "P", "PPL", "US", "WA", 737015),
    row(5032, "Tacoma", "", 47.2529, -122.4443, "P", "PPL", "US", "WA", 219346),
    row(5033, "Portland", "", 45.5234, -122.6762, "P", "PPL", "US", "OR", 652503),
    row(5034, "Salem", "", 44.9429, -123.0351, "P", "PPL", "US", "OR", 175535),
    row(5035, "Portland", "", 43.6615, -70.2553, "P", "PPL", "US", "ME", 68408),
    row(5036, "Chicago", "", 41.8500, -87.6500, "P", "PPL", "US", "IL", 2746388),
    row(5037, "Milwaukee", "", 43.0389, -87.9065, "P", "PPL", "US", "WI", 577222),
    row(5038, "Denver", "", 39.7392, -104.9847, "P", "PPL", "US", "CO", 715522),
    row(5039, "Boulder", "", 40.0150, -105.2705, "P", "PPL", "US", "CO", 108250),
    row(5040, "Phoenix", "", 33.4484, -112.0740, "P", "PPL", "US", "AZ", 1608139),
    row(5041, "Tucson", "", 32.2217, -110.9265, "P", "PPL", "US", "AZ", 542629),
    row(5042, "Nashville", "", 36.1659, -86.7844, "P", "PPL", "US", "TN", 689447),
    row(5043, "Chattanooga", "", 35.0456, -85.3097, "P", "PPL", "US", "TN", 181099),
    row(5044, "Atlanta", "", 33.7490, -84.3880, "P", "PPL", "US", "GA", 498715),
    row(5045, "Athens", "", 33.9609, -83.3779, "P", "PPL", "US", "GA", 127315),
    row(5046, "Columbus", "", 39.9612, -82.9988, "P", "PPL", "US", "OH", 905748),
    row(5047, "Cleveland", "", 41.4995, -81.6954, "P", "PPL", "US", "OH", 372624),
    row(5048, "Philadelphia", "", 39.9526, -75.1652, "P", "PPL", "US", "PA", 1603797),
    row(5049, "Pittsburgh", "", 40.4406, -79.9959, "P", "PPL", "US", "PA", 302971),
    row(5050, "Baltimore", "", 39.2904, -76.6122, "P", "PPL", "US", "MD", 585708),
    row(5051, "Washington", "washington d.c.", 38.8951, -77.0364, "P", "PPL", "US", "DC", 705749),
    row(5052, "Paris", "", 33.6609, -95.5555, "P", "PPL", "US", "TX", 24699),
    row(5053, "Vancouver", "", 45.6387, -122.6615, "P", "PPL", "US", "WA", 190915),
    row(5060, "London", "", 51.5085, -0.1257, "P", "PPLC", "GB", "ENG", 8961989),
    row(5061, "Cambridge", "", 52.2000, 0.1167, "P", "PPL", "GB", "ENG", 128515),
    row(5062, "Manchester", "", 53.4809, -2.2374, "P", "PPL", "GB", "ENG", 395515),
    row(5063, "Paris", "", 48.8534, 2.3488, "P", "PPLC", "FR", "11", 2138551),
    row(5064, "Versailles", "", 48.8000, 2.1300, "P", "PPL", "FR", "11", 85416),
    row(5065, "Toronto", "", 43.7001, -79.4163, "P", "PPL", "CA", "08", 2600000),
    row(5066, "Vancouver", "", 49.2500, -123.1193, "P", "PPL", "CA", "02", 631486),
    row(5067, "Berlin", "", 52.5200, 13.4100, "P", "PPLC", "DE", "16", 3426354),
];

fn render(rows: &[Row], out: &mut String) {
    use std::fmt::Write;
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t\t{}\t\t\t\t{}\t\t\t\t",
            r.id,
            r.name,
            r.name,
            r.alternates,
            r.lat,
            r.lon,
            r.class,
            r.code,
            r.country,
            r.admin1,
            r.population
        )
        .expect("write to string");
    }
}

/// The fixture gazetteer as a Geonames-format TSV dump.
pub fn fixture_gazetteer_tsv() -> String {
    let mut out = String::new();
    render(COUNTRIES, &mut out);
    render(STATES, &mut out);
    render(REGIONS, &mut out);
    render(CITIES, &mut out);
    out
}

/// State name -> population, matching the fixture's ADM1 rows. Doubles as a
/// per-state population table for cohort summaries.
pub fn fixture_state_populations() -> BTreeMap<String, u64> {
    STATES
        .iter()
        .map(|r| (r.name.to_lowercase(), r.population))
        .collect()
}

/// A small location-subreddit mapping consistent with the fixture gazetteer.
pub fn fixture_location_subreddits() -> BTreeMap<String, String> {
    [
        ("boston", "boston"),
        ("nyc", "new york city"),
        ("portland", "portland"),
        ("sanfrancisco", "san francisco"),
        ("londonuk", "london"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_has_unique_ids() {
        let mut ids: Vec<u64> = COUNTRIES
            .iter()
            .chain(STATES)
            .chain(REGIONS)
            .chain(CITIES)
            .map(|r| r.id)
            .collect();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n, "duplicate gazetteer ids in fixture");
    }

    #[test]
    fn fixture_rows_have_19_columns() {
        for line in fixture_gazetteer_tsv().lines() {
            assert_eq!(line.split('\t').count(), 19, "bad row: {line}");
        }
    }
}
