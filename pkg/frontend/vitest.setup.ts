// React's act() integration expects this flag in non-browser test runs.
(globalThis as Record<string, unknown>).IS_REACT_ACT_ENVIRONMENT = true;
