/**
 * Graph preview: fetch the server's DOT export and extract the node and
 * edge inventory for rendering (the diagram itself is drawn by whatever
 * DOT renderer the page embeds; the extraction feeds the fallback list
 * view and the tests).
 */

import { ApiClient } from "./api.js";

export interface DotNode {
  id: string;
  caption: string;
}

export interface DotEdge {
  src: string;
  tar: string;
  label: string;
}

export interface GraphPreview {
  dot: string;
  nodes: DotNode[];
  edges: DotEdge[];
}

const NODE_RE = /^\s*"([^"]+)" \[.*label="((?:[^"\\]|\\.)*)"\];$/;
const EDGE_RE = /^\s*"([^"]+)" -> "([^"]+)" \[label="((?:[^"\\]|\\.)*)"\];$/;

function unescape(s: string): string {
  return s.replace(/\\n/g, "\n").replace(/\\(.)/g, "$1");
}

export function parseDot(dot: string): { nodes: DotNode[]; edges: DotEdge[] } {
  const nodes: DotNode[] = [];
  const edges: DotEdge[] = [];
  for (const line of dot.split("\n")) {
    const edge = EDGE_RE.exec(line);
    if (edge) {
      edges.push({ src: edge[1], tar: edge[2], label: unescape(edge[3]) });
      continue;
    }
    const node = NODE_RE.exec(line);
    if (node) {
      nodes.push({ id: node[1], caption: unescape(node[2]) });
    }
  }
  return { nodes, edges };
}

export async function fetchGraphPreview(
  client: ApiClient,
  docId: string,
  event?: string,
): Promise<GraphPreview> {
  const dot = await client.dot(docId, event);
  return { dot, ...parseDot(dot) };
}
