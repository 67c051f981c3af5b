import { createApp } from "./main.js";

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (root) createApp(root);
});
