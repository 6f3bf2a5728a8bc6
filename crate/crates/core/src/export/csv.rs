//! CSV export of sampled objects.

use super::numfmt::fmt_sig;
use crate::scene::CsvTable;

const SIG: usize = 12;

/// Header `component,index,x,y[,z]`, rows in traversal order, 12
/// significant digits, `.` decimal point.
pub fn csv_string(table: &CsvTable) -> String {
    let mut out = String::new();
    out.push_str(if table.has_z { "component,index,x,y,z\n" } else { "component,index,x,y\n" });
    for (component, index, coords) in &table.rows {
        out.push_str(&format!(
            "{component},{index},{},{}",
            fmt_sig(coords[0], SIG),
            fmt_sig(coords[1], SIG)
        ));
        if table.has_z {
            out.push(',');
            out.push_str(&fmt_sig(coords[2], SIG));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_vertex_polyline_gives_four_lines() {
        let table = CsvTable {
            has_z: false,
            rows: vec![
                (0, 0, [0.0, 0.0, 0.0]),
                (0, 1, [1.0, 0.5, 0.0]),
                (0, 2, [2.0, 0.0, 0.0]),
            ],
        };
        let csv = csv_string(&table);
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(csv.lines().next().unwrap(), "component,index,x,y");
    }

    #[test]
    fn components_number_the_polylines() {
        let table = CsvTable {
            has_z: false,
            rows: vec![(0, 0, [0.0; 3]), (0, 1, [1.0, 0.0, 0.0]), (1, 0, [5.0, 5.0, 0.0])],
        };
        let csv = csv_string(&table);
        let comps: Vec<&str> =
            csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(comps, ["0", "0", "1"]);
    }

    #[test]
    fn round_trip_reproduces_vertices() {
        let rows = vec![
            (0u32, 0u32, [1.234567890123, -9.87654321012, 0.0]),
            (0, 1, [3.141592653589793, 2.718281828459045, 0.0]),
        ];
        let table = CsvTable { has_z: false, rows: rows.clone() };
        let csv = csv_string(&table);
        for (line, (_, _, want)) in csv.lines().skip(1).zip(&rows) {
            let cols: Vec<f64> =
                line.split(',').skip(2).map(|c| c.parse().unwrap()).collect();
            assert!((cols[0] - want[0]).abs() <= 1e-10);
            assert!((cols[1] - want[1]).abs() <= 1e-10);
        }
    }
}
