/** Verbatim formatting.
 *
 * Numbers coming back from the service are displayed exactly as received.
 * Rounding, clamping or re-deriving them client side would break the
 * pass-through property the tests assert, so the only transformation
 * allowed here is number-to-string via the default conversion.
 */

export function verbatim(value: number): string {
  return String(value);
}

export function interval(lo: number, hi: number): string {
  return `[${verbatim(lo)}, ${verbatim(hi)}]`;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&apos;");
}

export function escapeAttr(value: string | number): string {
  return escapeXml(String(value));
}
