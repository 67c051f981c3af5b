/** External lookup links for the current query text. */

export interface CrosscheckLinks {
  wikipedia: string;
  worldcat: string;
  scholar: string;
}

export function crosscheckUrls(query: string): CrosscheckLinks {
  const q = encodeURIComponent(query);
  return {
    wikipedia: `https://en.wikipedia.org/wiki/Special:Search?search=${q}`,
    worldcat: `https://search.worldcat.org/search?q=${q}`,
    scholar: `https://scholar.google.com/scholar?q=${q}`,
  };
}
