/**
 * Client-side fractional-index midpoint, mirroring the server's algorithm so
 * optimistic placements land exactly where the authoritative echo will.
 * Ranks are lowercase a-z strings ordered by plain string comparison;
 * canonical ranks never end in "a".
 */

const ALPHABET = "abcdefghijklmnopqrstuvwxyz";
const BASE = ALPHABET.length;

export function rankBetween(lo: string | null, hi: string | null): string {
  if (lo !== null && hi !== null && lo >= hi) {
    throw new Error(`rank bounds out of order: ${lo} >= ${hi}`);
  }
  return midpoint(lo ?? "", hi);
}

function midpoint(lo: string, hi: string | null): string {
  if (hi !== null) {
    let n = 0;
    while (n < hi.length && (lo[n] ?? "a") === hi[n]) n += 1;
    if (n > 0) return hi.slice(0, n) + midpoint(lo.slice(n), hi.slice(n));
  }
  const digitLo = lo ? ALPHABET.indexOf(lo[0]!) : 0;
  const digitHi = hi !== null ? ALPHABET.indexOf(hi[0]!) : BASE;
  if (digitHi - digitLo > 1) {
    return ALPHABET[(digitLo + digitHi) >> 1]!;
  }
  if (hi !== null && hi.length > 1) {
    return hi[0]!;
  }
  return ALPHABET[digitLo]! + midpoint(lo.slice(1), null);
}
