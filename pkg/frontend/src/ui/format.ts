/** Rendering helpers shared across pages. */

/** Integer cents to the server's canonical $#,##0.00 rendering. */
export function formatMoney(cents: number): string {
  const sign = cents < 0 ? "-" : "";
  const magnitude = Math.abs(cents);
  const dollars = Math.floor(magnitude / 100);
  const remainder = magnitude % 100;
  const grouped = dollars.toLocaleString("en-US");
  return `${sign}$${grouped}.${String(remainder).padStart(2, "0")}`;
}

/** Parse a user-entered dollar amount ("$1,234.56" or "1234.56") to cents. */
export function parseMoneyInput(text: string): number | null {
  const cleaned = text.replace(/[$,\s]/g, "");
  if (!cleaned) return null;
  if (!/^-?\d+(\.\d{1,2})?$/.test(cleaned)) return null;
  const [whole, fraction = ""] = cleaned.split(".");
  const cents = Math.abs(parseInt(whole!, 10)) * 100 + parseInt(fraction.padEnd(2, "0") || "0", 10);
  return cleaned.startsWith("-") ? -cents : cents;
}

const MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

/** RFC 3339 timestamp to a compact UTC display like "Jan 2, 2024 09:30". */
export function formatInstant(iso: string): string {
  const match = /^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2})/.exec(iso);
  if (!match) return iso;
  const [, year, month, day, hour, minute] = match;
  const monthName = MONTHS[parseInt(month!, 10) - 1] ?? month;
  return `${monthName} ${parseInt(day!, 10)}, ${year} ${hour}:${minute}`;
}

/** "YYYY-MM" chart bucket to "Jan 2024". */
export function formatMonth(key: string): string {
  const [year, month] = key.split("-");
  const name = MONTHS[parseInt(month ?? "1", 10) - 1] ?? key;
  return `${name} ${year}`;
}

/** Local datetime-input value to the wire's RFC 3339 millisecond form. */
export function toWireInstant(value: string): string {
  if (/^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}$/.test(value)) return `${value}:00.000Z`;
  if (/^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}$/.test(value)) return `${value}.000Z`;
  return value;
}
