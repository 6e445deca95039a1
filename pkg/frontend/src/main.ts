import { mount } from "./app.js";

const root = document.getElementById("app");
if (root) {
  mount(root, { apiBase: "" }); // same-origin: served at /ui by the service
}
