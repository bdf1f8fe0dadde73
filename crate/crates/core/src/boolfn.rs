/// A Boolean function given by its full truth table.
///
/// Rows are in binary counting order with the first input as the most
/// significant bit, so row `0b10` of a two-input function is `(1, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    pub name: String,
    pub arity: usize,
    pub outputs: usize,
    table: Vec<Vec<bool>>,
}

impl BooleanFunction {
    pub fn from_fn(name: impl Into<String>, arity: usize, outputs: usize, f: impl Fn(&[bool]) -> Vec<bool>) -> Self {
        let table = (0..1usize << arity)
            .map(|row| {
                let out = f(&row_bits(row, arity));
                assert_eq!(out.len(), outputs, "output width");
                out
            })
            .collect();
        BooleanFunction {
            name: name.into(),
            arity,
            outputs,
            table,
        }
    }

    pub fn and2() -> Self {
        Self::from_fn("AND", 2, 1, |x| vec![x[0] && x[1]])
    }

    pub fn or2() -> Self {
        Self::from_fn("OR", 2, 1, |x| vec![x[0] || x[1]])
    }

    pub fn identity() -> Self {
        Self::from_fn("ID", 1, 1, |x| vec![x[0]])
    }

    pub fn copy2() -> Self {
        Self::from_fn("COPY", 1, 2, |x| vec![x[0], x[0]])
    }

    pub fn constant(value: bool) -> Self {
        Self::from_fn(if value { "TRUE" } else { "FALSE" }, 0, 1, |_| vec![value])
    }

    pub fn eval(&self, inputs: &[bool]) -> &[bool] {
        assert_eq!(inputs.len(), self.arity);
        &self.table[bits_row(inputs)]
    }

    pub fn rows(&self) -> impl Iterator<Item = (Vec<bool>, &[bool])> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(move |(r, out)| (row_bits(r, self.arity), out.as_slice()))
    }

    pub fn row_count(&self) -> usize {
        self.table.len()
    }

    /// True when some output is 1 on every row; such gadgets may pre-color that output.
    pub fn output_is_constant_true(&self, output: usize) -> bool {
        self.table.iter().all(|row| row[output])
    }
}

/// Bits of `row` for `arity` inputs, most significant first.
pub fn row_bits(row: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|i| row >> (arity - 1 - i) & 1 == 1).collect()
}

pub fn bits_row(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(text: &str) -> Option<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_order_is_binary_counting() {
        assert_eq!(row_bits(2, 2), [true, false]);
        assert_eq!(bits_row(&[true, false]), 2);
        let and = BooleanFunction::and2();
        let outs: Vec<bool> = and.rows().map(|(_, o)| o[0]).collect();
        assert_eq!(outs, [false, false, false, true]);
        assert_eq!(bits_to_string(&[false, true, true, false]), "0110");
        assert_eq!(parse_bits("0110").unwrap(), [false, true, true, false]);
        assert!(parse_bits("01x").is_none());
    }
}
