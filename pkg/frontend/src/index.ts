export * from "./types.js";
export * from "./api.js";
export * from "./prechecks.js";
export * from "./capture.js";
export * from "./forms.js";
export * from "./session.js";
export * from "./graph.js";
