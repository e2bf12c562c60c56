/** Minimal RFC-4180 CSV reader (quoted fields, CRLF or LF line ends). */

export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let inQuotes = false;
  for (let i = 0; i < text.length; i++) {
    const c = text[i];
    if (inQuotes) {
      if (c === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          inQuotes = false;
        }
      } else {
        field += c;
      }
    } else if (c === '"') {
      inQuotes = true;
    } else if (c === ",") {
      row.push(field);
      field = "";
    } else if (c === "\n") {
      row.push(field.endsWith("\r") ? field.slice(0, -1) : field);
      field = "";
      rows.push(row);
      row = [];
    } else {
      field += c;
    }
  }
  if (field.length > 0 || row.length > 0) {
    row.push(field.endsWith("\r") ? field.slice(0, -1) : field);
    rows.push(row);
  }
  return rows.filter((r) => !(r.length === 1 && r[0] === ""));
}

export function parseNumeric(rows: string[][], column: string): number[] {
  const header = rows[0];
  const idx = header.indexOf(column);
  if (idx < 0) {
    throw new Error(`missing column ${column}`);
  }
  return rows.slice(1).map((r, k) => {
    const v = Number(r[idx]);
    if (!Number.isFinite(v)) {
      throw new Error(`non-numeric value in column ${column}, row ${k + 1}`);
    }
    return v;
  });
}
