export * from "./types";
export * from "./api";
export * from "./draft";
export * from "./dashboard";
