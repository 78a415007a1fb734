import { Client } from "./api.js";
import { App } from "./app.js";

// same-origin service when served via `rescueplan serve --ui`
new App(document, new Client("")).start();
